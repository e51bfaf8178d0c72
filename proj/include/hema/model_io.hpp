#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "hema/model.hpp"

namespace hema {

// Model files are YAML documents (JSON is accepted as well):
//
//   period: 0.005
//   b: {mean: 1.1, harmonics: [[1, 0.02, 0]]}
//   terms:
//     - {lambda: 1, m: 0.95, n: 2, r: {mean: 0.04, harmonics: [[1, 0.002, 0]]}, tau: 0.001, mu: 0}
//
// A coefficient function is a bare number (constant), a map with `mean` and
// optional `harmonics: [[j, cos, sin], ...]`, or a map with `samples: [...]`.
// `tau` and `mu` default to 0. Every error is a ModelError naming the field.

Model parse_model(std::string_view text);
Model load_model(const std::filesystem::path& path);

std::string dump_model(const Model& model);
void save_model(const Model& model, const std::filesystem::path& path);

}  // namespace hema
