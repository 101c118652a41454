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

#include "serialize.hpp"

#include <string>

namespace cpdyn {

namespace {

void expect_schema(const Json& j, const char* tag) {
  if (!j.is_object() || !j.contains("schema") || j.at("schema") != tag)
    fail(ErrorCode::Parse, std::string("expected a document tagged ") + tag);
}

// Wraps nlohmann's type and key errors.
template <class F>
auto guarded(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Json::exception& e) {
    fail(ErrorCode::Parse, e.what());
  }
}

Json matrices_to_json(const std::vector<Matrix>& ms) {
  Json arr = Json::array();
  for (const auto& m : ms) arr.push_back(matrix_to_json(m));
  return arr;
}

std::vector<Matrix> matrices_from_json(const Json& j) {
  if (!j.is_array()) fail(ErrorCode::Parse, "expected an array of matrices");
  std::vector<Matrix> out;
  for (const auto& m : j) out.push_back(matrix_from_json(m));
  return out;
}

Json blocks_to_json(const BlockStructure& b) {
  Json arr = Json::array();
  for (const auto& blk : b) arr.push_back({blk.left, blk.right});
  return arr;
}

BlockStructure blocks_from_json(const Json& j) {
  if (!j.is_array()) fail(ErrorCode::Parse, "blocks must be an array of [L, R] pairs");
  BlockStructure b;
  for (const auto& p : j) {
    if (!p.is_array() || p.size() != 2) fail(ErrorCode::Parse, "blocks must be an array of [L, R] pairs");
    b.push_back(Block{p[0].get<int>(), p[1].get<int>()});
  }
  return b;
}

Json markov_state_to_json(const MarkovStateSpec& s) {
  return {{"da", s.da},
          {"blocks", blocks_to_json(s.blocks)},
          {"q", s.q},
          {"omega_al", matrices_to_json(s.omega_al)},
          {"omega_re", matrices_to_json(s.omega_re)},
          {"de", s.de}};
}

MarkovStateSpec markov_state_from_json(const Json& j) {
  MarkovStateSpec s;
  s.da = j.at("da").get<int>();
  s.blocks = blocks_from_json(j.at("blocks"));
  s.q = j.at("q").get<std::vector<double>>();
  s.omega_al = matrices_from_json(j.at("omega_al"));
  s.omega_re = matrices_from_json(j.at("omega_re"));
  s.de = j.at("de").get<int>();
  return s;
}

Json markov_blocks_to_json(const MarkovBlocksSpec& s) {
  return {{"blocks", blocks_to_json(s.blocks)}, {"omega_re", matrices_to_json(s.omega_re)}, {"de", s.de}};
}

MarkovBlocksSpec markov_blocks_from_json(const Json& j) {
  MarkovBlocksSpec s;
  s.blocks = blocks_from_json(j.at("blocks"));
  s.omega_re = matrices_from_json(j.at("omega_re"));
  s.de = j.at("de").get<int>();
  return s;
}

}  // namespace

Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back({m(i, k).real(), m(i, k).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) fail(ErrorCode::Parse, "matrix must be a non-empty array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  if (!j[0].is_array()) fail(ErrorCode::Parse, "matrix rows must be arrays");
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const Json& row = j[i];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) fail(ErrorCode::Parse, "matrix is not rectangular");
    for (Eigen::Index k = 0; k < cols; ++k) {
      const Json& e = row[k];
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
        fail(ErrorCode::Parse, "matrix entries must be [re, im] number pairs");
      m(i, k) = cplx(e[0].get<double>(), e[1].get<double>());
    }
  }
  return m;
}

Json layout_to_json(const SpaceLayout& layout) {
  Json f = Json::array();
  for (const auto& fac : layout.factors()) f.push_back({fac.label, fac.dim});
  Json j = {{"factors", f}};
  if (layout.blocks()) j["blocks"] = blocks_to_json(*layout.blocks());
  return j;
}

SpaceLayout layout_from_json(const Json& j) {
  return guarded([&] {
    std::vector<Factor> factors;
    for (const auto& p : j.at("factors")) factors.push_back(Factor{p.at(0).get<std::string>(), p.at(1).get<int>()});
    std::optional<BlockStructure> blocks;
    if (j.contains("blocks")) blocks = blocks_from_json(j.at("blocks"));
    return SpaceLayout(std::move(factors), std::move(blocks));
  });
}

Json operator_to_json(const Operator& op) {
  return {{"schema", "cpdyn.operator/1"}, {"layout", layout_to_json(op.layout())}, {"matrix", matrix_to_json(op.matrix())}};
}

Operator operator_from_json(const Json& j) {
  expect_schema(j, "cpdyn.operator/1");
  return guarded([&] { return Operator(layout_from_json(j.at("layout")), matrix_from_json(j.at("matrix"))); });
}

Json family_to_json(const FamilySpec& spec) {
  Json j = {{"schema", "cpdyn.family/1"}, {"variant", to_string(spec.variant())}, {"ds", spec.ds()}, {"de", spec.de()}};
  std::visit(
      [&](const auto& d) {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, FactorizedSpec>) {
          j["omega_e"] = matrix_to_json(d.omega_e);
        } else if constexpr (std::is_same_v<T, ClassicalQuantumSpec>) {
          j["basis"] = matrix_to_json(d.basis);
          j["omegas"] = matrices_to_json(d.omegas);
        } else if constexpr (std::is_same_v<T, DirectSumSpec>) {
          j["block_dims"] = d.block_dims;
          j["omegas"] = matrices_to_json(d.omegas);
        } else if constexpr (std::is_same_v<T, MixedDirectSumSpec>) {
          j["block_dims"] = d.block_dims;
          j["split"] = d.split;
          j["fixed_se"] = matrices_to_json(d.fixed_se);
          j["omegas"] = matrices_to_json(d.omegas);
        } else if constexpr (std::is_same_v<T, MarkovBlocksSpec>) {
          j.update(markov_blocks_to_json(d));
        } else if constexpr (std::is_same_v<T, SteeredSpec>) {
          j["da"] = d.da;
          j["omega_ase"] = matrix_to_json(d.omega_ase);
          if (d.markov_source) j["markov_source"] = markov_state_to_json(*d.markov_source);
        } else if constexpr (std::is_same_v<T, KernelExtendedSpec>) {
          j["base"] = markov_blocks_to_json(d.base);
          j["kernel"] = subspace_to_json(d.kernel);
          j["scale"] = d.scale;
        }
      },
      spec.data());
  return j;
}

FamilySpec family_from_json(const Json& j) {
  expect_schema(j, "cpdyn.family/1");
  return guarded([&]() -> FamilySpec {
    const std::string name = j.at("variant").get<std::string>();
    FamilyVariant v;
    try {
      v = family_variant_from_string(name);
    } catch (const Error&) {
      fail(ErrorCode::Parse, "unknown family variant '" + name + "'");
    }
    switch (v) {
      case FamilyVariant::Factorized:
        return FamilySpec(FactorizedSpec{j.at("ds").get<int>(), matrix_from_json(j.at("omega_e"))});
      case FamilyVariant::ClassicalQuantum:
        return FamilySpec(ClassicalQuantumSpec{matrix_from_json(j.at("basis")), matrices_from_json(j.at("omegas"))});
      case FamilyVariant::DirectSumFactorized:
        return FamilySpec(DirectSumSpec{j.at("block_dims").get<std::vector<int>>(), matrices_from_json(j.at("omegas"))});
      case FamilyVariant::MixedDirectSum:
        return FamilySpec(MixedDirectSumSpec{j.at("block_dims").get<std::vector<int>>(), j.at("split").get<int>(),
                                             matrices_from_json(j.at("fixed_se")), matrices_from_json(j.at("omegas"))});
      case FamilyVariant::MarkovBlocks:
        return FamilySpec(markov_blocks_from_json(j));
      case FamilyVariant::Steered: {
        SteeredSpec s;
        s.da = j.at("da").get<int>();
        s.ds = j.at("ds").get<int>();
        s.de = j.at("de").get<int>();
        s.omega_ase = matrix_from_json(j.at("omega_ase"));
        if (j.contains("markov_source")) s.markov_source = markov_state_from_json(j.at("markov_source"));
        return FamilySpec(std::move(s));
      }
      case FamilyVariant::KernelExtended:
        return FamilySpec(KernelExtendedSpec{markov_blocks_from_json(j.at("base")), subspace_from_json(j.at("kernel")),
                                             j.value("scale", 1.0)});
    }
    fail(ErrorCode::Parse, "unknown family variant");
  });
}

Json subspace_to_json(const OperatorSubspace& v) {
  Json basis = Json::array();
  for (int k = 0; k < v.dim(); ++k) basis.push_back(matrix_to_json(v.element(k)));
  return {{"schema", "cpdyn.subspace/1"}, {"ds", v.ds()}, {"de", v.de()}, {"dim", v.dim()}, {"basis", basis}};
}

OperatorSubspace subspace_from_json(const Json& j) {
  expect_schema(j, "cpdyn.subspace/1");
  return guarded([&] {
    const int ds = j.at("ds").get<int>();
    const int de = j.at("de").get<int>();
    const auto elems = matrices_from_json(j.at("basis"));
    // Elements are re-orthonormalised so that hand-written inputs need only span V.
    return span_from_states(elems, ds, de);
  });
}

Json channel_to_json(const ChannelMap& c) {
  return {{"schema", "cpdyn.channel/1"}, {"in_dim", c.in_dim()}, {"out_dim", c.out_dim()}, {"matrix", matrix_to_json(c.matrix())}};
}

ChannelMap channel_from_json(const Json& j) {
  expect_schema(j, "cpdyn.channel/1");
  return guarded([&] { return ChannelMap(j.at("in_dim").get<int>(), j.at("out_dim").get<int>(), matrix_from_json(j.at("matrix"))); });
}

Json choi_to_json(const ChoiMatrix& c) {
  return {{"schema", "cpdyn.choi/1"}, {"in_dim", c.in_dim()}, {"out_dim", c.out_dim()}, {"matrix", matrix_to_json(c.matrix())}};
}

ChoiMatrix choi_from_json(const Json& j) {
  expect_schema(j, "cpdyn.choi/1");
  return guarded([&] { return ChoiMatrix(j.at("in_dim").get<int>(), j.at("out_dim").get<int>(), matrix_from_json(j.at("matrix"))); });
}

Json kraus_to_json(const KrausSet& k) {
  Json terms = Json::array();
  for (const auto& t : k.terms) terms.push_back({{"coeff", t.coeff}, {"op", matrix_to_json(t.op)}});
  return {{"schema", "cpdyn.kraus/1"}, {"in_dim", k.in_dim}, {"out_dim", k.out_dim}, {"all_positive", k.all_positive}, {"terms", terms}};
}

KrausSet kraus_from_json(const Json& j) {
  expect_schema(j, "cpdyn.kraus/1");
  return guarded([&] {
    KrausSet k;
    k.in_dim = j.at("in_dim").get<int>();
    k.out_dim = j.at("out_dim").get<int>();
    k.all_positive = true;
    for (const auto& t : j.at("terms")) {
      KrausTerm term{t.at("coeff").get<double>(), matrix_from_json(t.at("op"))};
      if (term.op.rows() != k.out_dim || term.op.cols() != k.in_dim) fail(ErrorCode::DimensionMismatch, "Kraus operator shape");
      k.all_positive = k.all_positive && term.coeff >= 0.0;
      k.terms.push_back(std::move(term));
    }
    return k;
  });
}

Json assignment_to_json(const AssignmentMap& a) {
  Json j = {{"schema", "cpdyn.assignment/1"},
            {"ds", a.ds()},
            {"de", a.de()},
            {"matrix", matrix_to_json(a.matrix())},
            {"cp", a.cp()},
            {"hermitian", a.hermitian()},
            {"min_choi_eigenvalue", a.min_choi_eigenvalue()},
            {"trace_consistency_error", a.trace_consistency_error()}};
  if (a.domain().cols() > 0) j["domain"] = matrix_to_json(a.domain());
  else j["domain"] = Json::array();
  return j;
}

AssignmentMap assignment_from_json(const Json& j) {
  expect_schema(j, "cpdyn.assignment/1");
  return guarded([&] {
    std::optional<Matrix> domain;
    const int ds = j.at("ds").get<int>();
    if (j.contains("domain")) {
      if (j.at("domain").empty()) domain = Matrix(ds * ds, 0);
      else domain = matrix_from_json(j.at("domain"));
    }
    return AssignmentMap(ds, j.at("de").get<int>(), matrix_from_json(j.at("matrix")), domain);
  });
}

Json unitaries_to_json(const std::vector<Matrix>& us) {
  return {{"schema", "cpdyn.unitaries/1"}, {"unitaries", matrices_to_json(us)}};
}

std::vector<Matrix> unitaries_from_json(const Json& j) {
  expect_schema(j, "cpdyn.unitaries/1");
  return guarded([&] { return matrices_from_json(j.at("unitaries")); });
}

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    fail(ErrorCode::Parse, e.what());
  }
}

}  // namespace cpdyn
