// Copyright 2026 The moonlab Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MOONLAB_REPORT_HPP
#define MOONLAB_REPORT_HPP

#include <string>

#include "json.hpp"
#include "moonlab/analysis.hpp"
#include "moonlab/datagen.hpp"
#include "moonlab/theory.hpp"
#include "moonlab/trainer.hpp"

namespace moonlab {

using Json = nlohmann::ordered_json;

// x rounded to 12 significant digits.
double round12(double x);

// Two-space indented text with every float rounded by round12.
std::string dump_json(const Json& j);
Json parse_json(const std::string& text);

Json to_json(const CurveReport& r);
Json to_json(const SplineFit& s);
Json to_json(const ShiftSpec& s);
Json to_json(const HyperParams& hp);
Json to_json(const PopulationSpec& p);
Json to_json(const ScoreModel& s);
Json to_json(const NonlinearityComparison& c);

}  // namespace moonlab

#endif  // MOONLAB_REPORT_HPP
