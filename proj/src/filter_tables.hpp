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

#include <span>
#include <string_view>
#include <vector>

namespace tfsep::detail {

struct FilterTable {
  std::string_view name;
  int order;    // family index, e.g. 8 for sym8
  int moments;  // vanishing moments of the wavelet
  std::span<const double> dec_lo;
};

const std::vector<FilterTable>& filter_tables();

}  // namespace tfsep::detail
