// Copyright 2026 The wzsim Authors
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

#include <array>
#include <cstdio>
#include <fstream>
#include <memory>

#include <openssl/evp.h>

#include "wz/error.hpp"
#include "wz/experiments.hpp"

namespace wz {

namespace fs = std::filesystem;

std::string sha256_hex(const fs::path &file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) {
        throw ValidationError("cannot read " + file.string());
    }
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) {
        throw ResourceError("SHA-256 context unavailable");
    }
    std::array<char, 1 << 16> buf{};
    while (in) {
        in.read(buf.data(), buf.size());
        if (in.gcount() > 0) {
            EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
        }
    }
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx.get(), digest.data(), &len);
    std::string hex;
    hex.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        char pair[3];
        std::snprintf(pair, sizeof pair, "%02x", digest[i]);
        hex += pair;
    }
    return hex;
}

nlohmann::json write_manifest(const RunConfig &config, const fs::path &out, const std::vector<fs::path> &outputs) {
    nlohmann::json files = nlohmann::json::array();
    for (const auto &path : outputs) {
        files.push_back({{"path", path.filename().string()}, {"sha256", sha256_hex(path)}});
    }
    nlohmann::json manifest{{"artifact_version", kArtifactVersion}, {"config", to_json(config)}, {"outputs", files}};
    std::ofstream f(out / "manifest.json", std::ios::binary | std::ios::trunc);
    if (!f) {
        throw ValidationError("cannot write manifest in " + out.string());
    }
    f << manifest.dump(2) << "\n";
    return manifest;
}

} // namespace wz
