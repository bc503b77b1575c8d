// SPDX-License-Identifier: Apache-2.0
//
// mmic: multipath intra-cluster statistics toolkit for mmWave channels
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

#ifndef MMIC_CLI_HPP
#define MMIC_CLI_HPP

#include <string>
#include <vector>

namespace mmic {

// Runs the mmic command line (subcommands: cluster, fit, synth, cdf) with
// argv-style arguments, program name excluded. Returns the process exit
// code: 0 success, 2 usage/validation errors, 1 internal errors. Kept
// exit()-free so tests can drive it in-process.
int run_cli(const std::vector<std::string>& args);

}  // namespace mmic

#endif  // MMIC_CLI_HPP
