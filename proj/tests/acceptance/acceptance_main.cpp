/* Copyright 2026 The rangelab Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// One line per acceptance criterion; exit status is nonzero if any fails.

#include <cstdio>
#include <string>

#include "rangelab/harness.hpp"
#include "rangelab/tolerances.hpp"

int main(int argc, char** argv) {
  const std::string profile = argc > 1 ? argv[1] : "full";
  std::printf("acceptance profile=%s tolerances=v%d\n", profile.c_str(), rangelab::tolerances::kProfileVersion);
  try {
    std::size_t failed = 0, total = 0;
    rangelab::acceptance_suite(profile, [&](const rangelab::StatReport& r) {
      ++total;
      if (!r.pass) ++failed;
      std::printf("%s %s | stat=%.6g p=%.4g threshold=%.4g n=%zu/%zu | %s\n", r.pass ? "PASS" : "FAIL",
                  r.name.c_str(), r.statistic, r.p_value, r.threshold, r.n1, r.n2, r.detail.c_str());
      std::fflush(stdout);
    });
    std::printf("%zu/%zu criteria passed\n", total - failed, total);
    return failed == 0 ? 0 : 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "acceptance aborted: %s\n", e.what());
    return 2;
  }
}
