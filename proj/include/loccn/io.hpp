// Copyright 2026 The loccn Authors
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

#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "loccn/analysis.hpp"
#include "loccn/classes.hpp"
#include "loccn/feasible.hpp"
#include "loccn/protocol.hpp"
#include "loccn/state.hpp"
#include "loccn/volumes.hpp"

namespace loccn {

/// Key order is preserved everywhere so identical values serialize to
/// byte-identical documents.
using Json = nlohmann::ordered_json;

/// Canonical dump: 2-space indent, trailing newline.
std::string dump_json(const Json& j);

/// Parse errors surface as std::invalid_argument annotated with the source
/// (file path or caller-supplied label) and the parser's position message.
Json json_from_file(const std::string& path);
Json json_from_text(const std::string& text, const std::string& where = "input");
void json_to_file(const Json& j, const std::string& path);

Json complex_to_json(const Complex& c);  // [re, im]
Complex json_to_complex(const Json& j, const std::string& where);

Json matrix_to_json(const CMatrix& m);  // rows of [re, im] cells
CMatrix json_to_matrix(const Json& j, const std::string& where);

Json class_to_json(const ClassSpec& spec);

/// Rebuilds a class from JSON and re-verifies it: factors unitary, the
/// identity present, every element stabilizing the representative, and (for
/// up to 32 elements) closure under products.
ClassSpec json_to_class(const Json& j);

/// State file: {"n", "dims", "class": name or inline spec, "parties":
/// [{"bloch": [x,y,z]} or {"matrix": rows}]}.  Qubit operators serialize as
/// Bloch entries only when that is bit-exactly invertible.
Json state_to_json(const StateInClass& state, const ClassSpec* inline_spec = nullptr);

struct ParsedState {
  StateInClass state;
  ClassSpec spec;
};

/// Resolves the class against the built-ins or an inline spec and validates
/// the party operators against it.
ParsedState parse_state(const Json& j);

Json witness_to_json(const Witness& w);
Witness json_to_witness(const Json& j);

Json tree_to_json(const ProtocolTree& t);

/// Leaf states inside trees carry only a class name and operators; they are
/// never resolved against a group, so unknown names are fine there.
ProtocolTree json_to_tree(const Json& j);

Json slice_to_json(const Slice& slice, const ClassSpec* inline_spec = nullptr);

struct ParsedSlice {
  Slice slice;
  ClassSpec spec;
};

/// Slice file: {"kind": "party-ball" | "segment" | "custom", "party", "base":
/// state file, then per kind: segment "h" ({"bloch"} or {"matrix"}) and
/// "symmetry" (index into the class stabilizer, or {"factors": [...]});
/// custom "sampler" id.
ParsedSlice parse_slice(const Json& j);

Json feasibility_to_json(const SimplexFeasibility& f);
Json witness_opt_to_json(const ConvertResult& r);
Json run_report_to_json(const RunReport& r);
Json volume_to_json(const VolumeEstimate& v);

}  // namespace loccn
