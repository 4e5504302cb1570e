#!/usr/bin/env python3
"""Regenerates src/filter_tables.cpp from PyWavelets' orthogonal filter tables.

The emitted coefficients are the analysis low-pass filters. Every table is
re-validated at test time by the perfect-reconstruction and moment checks.
"""
import sys

import pywt

FAMILIES = (
    [("haar", 1, 1)]
    + [(f"db{p}", p, p) for p in range(1, 21)]
    + [(f"sym{p}", p, p) for p in range(2, 21)]
    + [(f"coif{p}", p, 2 * p) for p in range(1, 18)]
)


LICENSE = [
    '// Copyright 2026 The tfsep Authors. All Rights Reserved.',
    '//',
    '// Licensed under the Apache License, Version 2.0 (the "License");',
    '// you may not use this file except in compliance with the License.',
    '// You may obtain a copy of the License at',
    '//',
    '//      http://www.apache.org/licenses/LICENSE-2.0',
    '//',
    '// Unless required by applicable law or agreed to in writing, software',
    '// distributed under the License is distributed on an "AS IS" BASIS,',
    '// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.',
    '// See the License for the specific language governing permissions and',
    '// limitations under the License.',
]


def main(out):
    lines = LICENSE + [
        "",
        "// Generated by tools/gen_filter_tables.py. Do not edit.",
        "",
        '#include "filter_tables.hpp"',
        "",
        "namespace tfsep::detail {",
        "namespace {",
        "",
    ]
    for name, _, _ in FAMILIES:
        coeffs = pywt.Wavelet(name).dec_lo
        lines.append(f"constexpr double k_{name}[] = {{")
        for c in coeffs:
            lines.append(f"    {c!r},")
        lines.append("};")
    lines += ["", "}  // namespace", "", "const std::vector<FilterTable>& filter_tables() {",
              "  static const std::vector<FilterTable> tables = {"]
    for name, order, moments in FAMILIES:
        lines.append(f'      {{"{name}", {order}, {moments}, k_{name}}},')
    lines += ["  };", "  return tables;", "}", "", "}  // namespace tfsep::detail", ""]
    with open(out, "w") as f:
        f.write("\n".join(lines))


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "src/filter_tables.cpp")
