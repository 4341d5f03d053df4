// Copyright 2026 The qsnn Authors
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

#ifndef QSNN_ERRORS_H
#define QSNN_ERRORS_H

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qsnn {

/// A caller broke a documented precondition (bad index, mismatched sizes, ...).
class ContractViolation : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

/// A configured resource bound (qubit limit, enumeration limit) would be exceeded.
class ResourceError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// Missing or unreadable file.
class IoError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// A config or model document failed validation. `fields()` names every offending entry.
class ValidationError : public std::runtime_error {
   public:
    explicit ValidationError(std::vector<std::string> fields)
        : std::runtime_error(join(fields)), fields_(std::move(fields)) {}

    const std::vector<std::string> &fields() const { return fields_; }

   private:
    static std::string join(const std::vector<std::string> &fields) {
        std::string msg = "validation failed:";
        for (const auto &f : fields) {
            msg += "\n  ";
            msg += f;
        }
        return msg;
    }

    std::vector<std::string> fields_;
};

inline void require(bool condition, const std::string &what) {
    if (!condition) {
        throw ContractViolation(what);
    }
}

}  // namespace qsnn

#endif  // QSNN_ERRORS_H
