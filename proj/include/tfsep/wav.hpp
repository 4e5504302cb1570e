// Copyright 2026 The tfsep Authors. All Rights Reserved.
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

#include <filesystem>

#include "tfsep/signal.hpp"

namespace tfsep {

/// Reads a 16-bit little-endian PCM RIFF/WAVE file. Multi-channel audio is
/// down-mixed by averaging channels; samples are scaled by 1/32768.
/// Throws DataError for truncated or unsupported files.
Signal load_wav(const std::filesystem::path& path);

/// Writes a mono 16-bit PCM file; samples are rounded and clipped to the
/// int16 range.
void save_wav(const Signal& s, const std::filesystem::path& path);

}  // namespace tfsep
