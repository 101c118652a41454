// Copyright 2026 The cpdyn Authors
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

#pragma once

#include <json.hpp>
#include <vector>

#include "channel.hpp"
#include "families.hpp"
#include "subspace.hpp"
#include "tensor.hpp"

namespace cpdyn {

using Json = nlohmann::json;

// Matrices are row-major arrays of rows, each entry a [re, im] pair. Every
// top-level document carries a "schema" tag; readers reject unknown tags
// with ErrorCode::Parse.

Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j);

Json layout_to_json(const SpaceLayout& layout);
SpaceLayout layout_from_json(const Json& j);
Json operator_to_json(const Operator& op);
Operator operator_from_json(const Json& j);

Json family_to_json(const FamilySpec& spec);
FamilySpec family_from_json(const Json& j);

Json subspace_to_json(const OperatorSubspace& v);
OperatorSubspace subspace_from_json(const Json& j);

Json channel_to_json(const ChannelMap& c);
ChannelMap channel_from_json(const Json& j);
Json choi_to_json(const ChoiMatrix& c);
ChoiMatrix choi_from_json(const Json& j);
Json kraus_to_json(const KrausSet& k);
KrausSet kraus_from_json(const Json& j);
Json assignment_to_json(const AssignmentMap& a);
AssignmentMap assignment_from_json(const Json& j);

Json unitaries_to_json(const std::vector<Matrix>& us);
std::vector<Matrix> unitaries_from_json(const Json& j);

/// Parses text and converts nlohmann errors to ErrorCode::Parse.
Json parse_json(const std::string& text);

}  // namespace cpdyn
