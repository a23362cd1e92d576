#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "crashgp/gp.hpp"

namespace crashgp {

inline constexpr int kModelSchemaVersion = 1;

/// JSON document with training data, hyperparameters, output transform,
/// jitter and fit settings. Reloading reproduces predictions bit-for-bit.
std::string serialize_model(const GpModel& model);
GpModel deserialize_model(std::string_view text);

void save_model(const GpModel& model, const std::filesystem::path& path);
GpModel load_model(const std::filesystem::path& path);

}  // namespace crashgp
