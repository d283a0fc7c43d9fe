// Copyright 2026 The Umbra Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "umbra/image.hpp"

namespace umbra::compositor {

struct CompositeInputs {
    RgbImage object;
    MaskImage mask;
    GrayImage shadow;  // occlusion in [0,1]
    RgbImage background;
    double intensity = 1.0;
};

/// out = m·object + (1-m)·background·(1 - min(1, I·shadow)), clamped to [0,1].
/// The reversed shadow acts as a neutral transmittance on the background.
/// Throws ShapeError when the images disagree in resolution.
RgbImage composite(const CompositeInputs& inputs);

}  // namespace umbra::compositor
