// src/base/error.h

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef LIDKIT_BASE_ERROR_H_
#define LIDKIT_BASE_ERROR_H_

#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>

namespace lid {

template <typename... Args>
std::string StrCat(Args&&... args) {
  std::ostringstream os;
  (os << ... << std::forward<Args>(args));
  return os.str();
}

template <typename... Args>
[[noreturn]] void Die(Args&&... args) {
  throw std::runtime_error(StrCat(std::forward<Args>(args)...));
}

// Precondition / input validation check. Error text should name the offending
// value, not just the condition.
#define LID_REQUIRE(cond, ...)              \
  do {                                      \
    if (!(cond)) ::lid::Die(__VA_ARGS__);   \
  } while (0)

}  // namespace lid

#endif  // LIDKIT_BASE_ERROR_H_
