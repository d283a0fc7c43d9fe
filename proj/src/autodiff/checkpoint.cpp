// Copyright 2026 The Umbra Authors
// SPDX-License-Identifier: Apache-2.0

#include "umbra/autodiff/checkpoint.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "umbra/error.hpp"

namespace umbra::ad {
namespace {

static_assert(std::endian::native == std::endian::little, "checkpoint I/O assumes a little-endian host");

constexpr const char* kFormat = "umbra-checkpoint";
constexpr int kVersion = 1;

}  // namespace

const CheckpointTensor& Checkpoint::get(const std::string& name) const {
    for (const auto& t : tensors) {
        if (t.name == name) return t;
    }
    throw IoError("checkpoint has no tensor '" + name + "'");
}

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& checkpoint) {
    nlohmann::json header = {{"format", kFormat}, {"version", kVersion}, {"meta", checkpoint.meta}};
    nlohmann::json list = nlohmann::json::array();
    std::uint64_t offset = 0;
    for (const auto& t : checkpoint.tensors) {
        if (t.data.size() != numel(t.shape)) throw ShapeError("checkpoint: tensor '" + t.name + "' size mismatch");
        list.push_back({{"name", t.name}, {"shape", t.shape}, {"offset", offset}, {"count", t.data.size()}});
        offset += t.data.size() * sizeof(float);
    }
    header["tensors"] = std::move(list);
    const std::string text = header.dump();
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    const std::uint64_t len = text.size();
    out.write(reinterpret_cast<const char*>(&len), sizeof(len));
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    for (const auto& t : checkpoint.tensors) {
        out.write(reinterpret_cast<const char*>(t.data.data()), static_cast<std::streamsize>(t.data.size() * sizeof(float)));
    }
    if (!out) throw IoError("write failed: " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::uint64_t len = 0;
    in.read(reinterpret_cast<char*>(&len), sizeof(len));
    if (!in || len > (1u << 30)) throw IoError("bad checkpoint header in " + path.string());
    std::string text(len, '\0');
    in.read(text.data(), static_cast<std::streamsize>(len));
    if (!in) throw IoError("truncated checkpoint header in " + path.string());
    nlohmann::json header;
    try {
        header = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw IoError("malformed checkpoint header in " + path.string() + ": " + e.what());
    }
    if (header.value("format", "") != kFormat || header.value("version", 0) != kVersion) {
        throw IoError("unsupported checkpoint format in " + path.string());
    }
    std::vector<char> payload((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    Checkpoint ck;
    ck.meta = header.value("meta", nlohmann::json::object());
    for (const auto& j : header.at("tensors")) {
        CheckpointTensor t;
        t.name = j.at("name").get<std::string>();
        t.shape = j.at("shape").get<Shape>();
        auto offset = j.at("offset").get<std::uint64_t>();
        auto count = j.at("count").get<std::uint64_t>();
        if (count != numel(t.shape) || offset + count * sizeof(float) > payload.size()) {
            throw IoError("checkpoint tensor '" + t.name + "' out of range in " + path.string());
        }
        t.data.resize(count);
        std::memcpy(t.data.data(), payload.data() + offset, count * sizeof(float));
        ck.tensors.push_back(std::move(t));
    }
    return ck;
}

}  // namespace umbra::ad
