// Copyright 2026 The gramwb Authors.
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

#ifndef GRAMWB_TEXTIO_H_
#define GRAMWB_TEXTIO_H_

#include <optional>
#include <string>
#include <string_view>

namespace gramwb {

std::optional<std::string> ReadTextFile(const std::string& path);

// Writes via a temporary file and rename, so readers never see a partial file.
bool WriteTextFileAtomic(const std::string& path, std::string_view content);

}  // namespace gramwb

#endif  // GRAMWB_TEXTIO_H_
