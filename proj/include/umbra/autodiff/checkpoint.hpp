// Copyright 2026 The Umbra Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "umbra/autodiff/tensor.hpp"

namespace umbra::ad {

// File layout: 8-byte little-endian header length, a JSON header, then the
// payload of little-endian float32 values. Header:
//   {"format":"umbra-checkpoint","version":1,"tensors":[{"name","shape","offset","count"}...],"meta":{...}}
// where offset is in bytes from the start of the payload.

struct CheckpointTensor {
    std::string name;
    Shape shape;
    std::vector<float> data;
};

struct Checkpoint {
    std::vector<CheckpointTensor> tensors;
    nlohmann::json meta = nlohmann::json::object();

    /// Throws IoError when absent.
    const CheckpointTensor& get(const std::string& name) const;
};

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& checkpoint);
/// Throws IoError on a truncated or malformed file.
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace umbra::ad
