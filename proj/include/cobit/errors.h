// Copyright 2026 The Cobit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace cobit {

/// Base class for every error raised by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A caller violated an operation's contract (bad width, unknown register, ...).
struct ContractError : Error {
    using Error::Error;
};

/// An input document does not match its schema.
struct SchemaError : Error {
    using Error::Error;
};

/// A request needs more qubits (or more enumerated patterns) than dense storage permits.
struct WidthOverflow : Error {
    using Error::Error;
};

}  // namespace cobit
