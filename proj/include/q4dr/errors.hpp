// Copyright 2026 The q4dr Authors
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace q4dr {

/// Failure categories. The numeric values are mirrored by the C API status
/// codes in q4dr.h, so they must stay stable.
enum class ErrorCode : int {
    kInvalidArgument = 1,
    kIo = 2,
    kSchema = 3,
    kRange = 4,
    kMissingField = 5,
    kInfeasibleInstance = 6,
    kAllTrivialPartitions = 7,
    kInfeasibleAssignment = 8,
    kNoFeasibleSolution = 9,
    kSizeGuard = 10,
};

class Error : public std::runtime_error {
 public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

 private:
    ErrorCode code_;
};

#define Q4DR_DEFINE_ERROR(Name, Code)                                  \
    class Name : public Error {                                        \
     public:                                                           \
        explicit Name(const std::string& what) : Error(Code, what) {} \
    }

Q4DR_DEFINE_ERROR(InvalidArgument, ErrorCode::kInvalidArgument);
Q4DR_DEFINE_ERROR(IoError, ErrorCode::kIo);
Q4DR_DEFINE_ERROR(SchemaError, ErrorCode::kSchema);
Q4DR_DEFINE_ERROR(RangeError, ErrorCode::kRange);
Q4DR_DEFINE_ERROR(MissingFieldError, ErrorCode::kMissingField);
Q4DR_DEFINE_ERROR(InfeasibleInstance, ErrorCode::kInfeasibleInstance);
Q4DR_DEFINE_ERROR(AllTrivialPartitions, ErrorCode::kAllTrivialPartitions);
Q4DR_DEFINE_ERROR(NoFeasibleSolution, ErrorCode::kNoFeasibleSolution);
Q4DR_DEFINE_ERROR(SizeGuardExceeded, ErrorCode::kSizeGuard);

#undef Q4DR_DEFINE_ERROR

}  // namespace q4dr
