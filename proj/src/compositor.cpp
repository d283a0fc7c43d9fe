// Copyright 2026 The Umbra Authors
// SPDX-License-Identifier: Apache-2.0

#include "umbra/compositor.hpp"

#include <algorithm>

#include "umbra/error.hpp"

namespace umbra::compositor {

RgbImage composite(const CompositeInputs& in) {
    require_same_shape(in.object, in.mask, "composite");
    require_same_shape(in.object, in.shadow, "composite");
    require_same_shape(in.object, in.background, "composite");
    if (!(in.intensity >= 0.0)) throw ConfigError("composite: intensity must be non-negative");
    RgbImage out(in.object.width, in.object.height);
    for (std::size_t i = 0; i < out.size(); ++i) {
        Rgb& o = out.pixels[i];
        if (in.mask.pixels[i]) {
            for (int c = 0; c < 3; ++c) o[c] = std::clamp(in.object.pixels[i][c], 0.0, 1.0);
            continue;
        }
        double transmittance = 1.0 - std::min(1.0, in.intensity * in.shadow.pixels[i]);
        for (int c = 0; c < 3; ++c) o[c] = std::clamp(in.background.pixels[i][c] * transmittance, 0.0, 1.0);
    }
    return out;
}

}  // namespace umbra::compositor
