// SPDX-License-Identifier: Apache-2.0
//
// nfpol - near-field polarized focusing simulator
// Copyright (C) 2026 nfpol contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <stdexcept>
#include <string>

namespace nfpol
{
    // Raised when an input has no well-defined geometric meaning, e.g. normalizing
    // the zero vector or a receiver placed on top of a transmit element.
    class degenerate_input : public std::domain_error
    {
    public:
        explicit degenerate_input(const std::string &what) : std::domain_error(what) {}
    };

    inline void check_positive(double value, const char *name)
    {
        if (!(value > 0.0))
            throw std::invalid_argument(std::string(name) + " must be strictly positive");
    }
}
