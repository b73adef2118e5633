// Copyright 2026 The ARWA Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// JSON model schema. All frequencies are rad/s unless "frequency_unit": "GHz" is given, in which
// case every frequency-valued field (energies, drive amplitudes, rates, drive frequency, builder
// frequencies) is multiplied by 2 pi 1e9.

#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"

#include "arwa/frame_graph.hpp"
#include "arwa/model.hpp"
#include "arwa/sweep.hpp"

namespace arwa {

using Json = nlohmann::json;

/// Builds a model from a JSON document. Relative paths inside it resolve against base_dir.
/// Throws ConfigError naming the offending field.
LindbladModel model_from_json(const Json& doc, const std::filesystem::path& base_dir = {});

LindbladModel load_model(const std::filesystem::path& path);

/// Explicit form (energies, drives, custom channels, observables) in rad/s. Re-ingesting it
/// reproduces the model bit for bit.
Json model_to_json(const LindbladModel& model);

/// Factory for sweeps driven by a JSON document: "drive_frequency" and "temperature_K" set the
/// top-level key, any other axis name sets that parameter of the "builder" block.
ModelFactory json_axis(Json doc, std::string axis, std::filesystem::path base_dir = {});

/// {"vertices": [{"index", "k", "in_graph"}], "edges": [{"n", "m", "style", "weight"}]}.
Json graph_to_json(const FrameGraph& graph);

/// Reads a real matrix from CSV (one row per line).
Eigen::MatrixXd read_csv_matrix(const std::filesystem::path& path);

Json read_json_file(const std::filesystem::path& path);

}  // namespace arwa
