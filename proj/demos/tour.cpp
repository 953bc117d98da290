/*
 * Copyright 2026 The c3msv Authors
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

// A short walk through the library at nbar_T = 3, phi = pi/8.

#include <cstdio>

#include "c3msv/c3msv.hpp"

int main() {
    using namespace c3msv;
    const auto cfg = SqueezingConfig::from_total_photons(3.0, kPi / 8);
    std::printf("r = %.6f, mean photons per mode:", cfg.r());
    const auto n = mean_photon_numbers(cfg);
    std::printf(" %.4f %.4f %.4f\n\n", n.n1, n.n2, n.n3);

    std::printf("%-8s %12s\n", "case", "G");
    for (const auto& row : steering_table(cfg)) {
        std::printf("%-8s %12.6f\n", to_string(*row.steering_case).c_str(), row.value);
    }

    const auto rgs = residual_gaussian_steering(cfg);
    std::printf("\nresidual Gaussian steering: %.6f\n", rgs.value);

    std::printf("\nsudden death of G(23to1), gamma = 1:\n");
    for (double nr : {0.0, 0.5, 1.0}) {
        const auto t = sudden_death_time(cfg, ChannelParams::uniform(1.0, nr), SteeringCase::k23to1);
        std::printf("  n_R = %.1f  gamma t* = %.6f\n", nr, t.value_or(-1.0));
    }

    std::printf("\nWigner negativity of photon-subtracted reductions:\n");
    for (const char* tag : {"1a|2", "1a|23", "2a|13", "1a3a|2", "2a3a|1"}) {
        const auto wn = negativity(cfg, SubtractionScheme::parse(tag));
        std::printf("  %-7s N = %.6f  (%d refinements)\n", tag, wn.value, wn.quadrature.refinements);
    }
    return 0;
}
