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

#include "cpdyn/cpdyn.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>
#include <vector>

#include "channel.hpp"
#include "consistency.hpp"
#include "families.hpp"
#include "harness.hpp"
#include "info.hpp"
#include "serialize.hpp"
#include "subspace.hpp"
#include "tensor.hpp"

#define CPDYN_STR2(x) #x
#define CPDYN_STR(x) CPDYN_STR2(x)

struct cpdyn_rng {
  cpdyn::Rng rng;
};
struct cpdyn_operator {
  cpdyn::Operator op;
};
struct cpdyn_channel {
  cpdyn::ChannelMap map;
};
struct cpdyn_subspace {
  cpdyn::OperatorSubspace v;
};
struct cpdyn_assignment {
  cpdyn::AssignmentMap a;
};
struct cpdyn_family {
  cpdyn::FamilySpec spec;
};

namespace {

thread_local std::string g_last_error;

struct NullArgument {};

template <class F>
cpdyn_status guard(F&& f) {
  try {
    f();
    g_last_error.clear();
    return CPDYN_OK;
  } catch (const NullArgument&) {
    g_last_error = "required pointer argument is NULL";
    return CPDYN_NULL_ARGUMENT;
  } catch (const cpdyn::Error& e) {
    g_last_error = e.what();
    return static_cast<cpdyn_status>(static_cast<int>(e.code()));
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return CPDYN_INTERNAL_ERROR;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return CPDYN_INTERNAL_ERROR;
  } catch (...) {
    g_last_error = "unknown failure";
    return CPDYN_INTERNAL_ERROR;
  }
}

template <class... P>
void need(const P*... ptrs) {
  if (((ptrs == nullptr) || ...)) throw NullArgument{};
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

std::vector<std::string> labels_of(const char* const* labels, size_t n) {
  std::vector<std::string> out;
  for (size_t i = 0; i < n; ++i) {
    need(labels[i]);
    out.emplace_back(labels[i]);
  }
  return out;
}

cpdyn::Matrix matrix_from_interleaved(const double* data, int rows, int cols) {
  cpdyn::Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = cpdyn::cplx(data[2 * (i * cols + j)], data[2 * (i * cols + j) + 1]);
  return m;
}

cpdyn_operator* wrap(cpdyn::Operator op) { return new cpdyn_operator{std::move(op)}; }

cpdyn::Operator plain_operator(cpdyn::Matrix m) {
  const int d = static_cast<int>(m.rows());
  return cpdyn::Operator(cpdyn::SpaceLayout::single("S", d), std::move(m));
}

}  // namespace

extern "C" {

CPDYN_API const char* cpdyn_version(void) { return CPDYN_STR(CPDYN_VERSION_STRING); }

CPDYN_API const char* cpdyn_status_string(cpdyn_status status) {
  switch (status) {
    case CPDYN_OK: return "ok";
    case CPDYN_INVALID_ARGUMENT: return "invalid argument";
    case CPDYN_DIMENSION_MISMATCH: return "dimension mismatch";
    case CPDYN_UNKNOWN_FACTOR: return "unknown tensor factor";
    case CPDYN_NOT_HERMITIAN: return "operator is not Hermitian";
    case CPDYN_NOT_PSD: return "operator is not positive semidefinite";
    case CPDYN_NOT_UNITARY: return "operator is not unitary";
    case CPDYN_INVALID_DISTRIBUTION: return "invalid probability distribution";
    case CPDYN_ZERO_NORMALIZATION: return "zero normalization";
    case CPDYN_SIGNED_KRAUS: return "operator sum has negative coefficients";
    case CPDYN_OUT_OF_KERNEL: return "map leaves the kernel subspace";
    case CPDYN_PARSE_ERROR: return "parse error";
    case CPDYN_NULL_ARGUMENT: return "null argument";
    case CPDYN_INTERNAL_ERROR: return "internal error";
  }
  return "unknown status";
}

CPDYN_API const char* cpdyn_last_error(void) { return g_last_error.c_str(); }

CPDYN_API void cpdyn_string_free(char* s) { std::free(s); }

// ---- rng

CPDYN_API cpdyn_status cpdyn_rng_create(uint64_t seed, cpdyn_rng** out) {
  return guard([&] {
    need(out);
    *out = new cpdyn_rng{cpdyn::Rng(seed)};
  });
}

CPDYN_API void cpdyn_rng_free(cpdyn_rng* rng) { delete rng; }

// ---- operators

CPDYN_API cpdyn_status cpdyn_operator_create(const char* const* labels, const int* dims, size_t n_factors,
                                             const double* data, cpdyn_operator** out) {
  return guard([&] {
    need(labels, dims, data, out);
    std::vector<cpdyn::Factor> factors;
    for (size_t i = 0; i < n_factors; ++i) {
      need(labels[i]);
      factors.push_back(cpdyn::Factor{labels[i], dims[i]});
    }
    cpdyn::SpaceLayout layout(std::move(factors));
    const int d = layout.total_dim();
    *out = wrap(cpdyn::Operator(std::move(layout), matrix_from_interleaved(data, d, d)));
  });
}

CPDYN_API void cpdyn_operator_free(cpdyn_operator* op) { delete op; }

CPDYN_API cpdyn_status cpdyn_operator_dim(const cpdyn_operator* op, int* dim) {
  return guard([&] {
    need(op, dim);
    *dim = op->op.dim();
  });
}

CPDYN_API cpdyn_status cpdyn_operator_data(const cpdyn_operator* op, double* out, size_t len) {
  return guard([&] {
    need(op, out);
    const auto& m = op->op.matrix();
    if (len < static_cast<size_t>(2 * m.size())) cpdyn::fail(cpdyn::ErrorCode::DimensionMismatch, "output buffer too small");
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index j = 0; j < m.cols(); ++j) {
        out[2 * (i * m.cols() + j)] = m(i, j).real();
        out[2 * (i * m.cols() + j) + 1] = m(i, j).imag();
      }
  });
}

CPDYN_API cpdyn_status cpdyn_operator_to_json(const cpdyn_operator* op, char** out) {
  return guard([&] {
    need(op, out);
    *out = dup_string(cpdyn::operator_to_json(op->op).dump());
  });
}

CPDYN_API cpdyn_status cpdyn_operator_from_json(const char* json, cpdyn_operator** out) {
  return guard([&] {
    need(json, out);
    *out = wrap(cpdyn::operator_from_json(cpdyn::parse_json(json)));
  });
}

CPDYN_API cpdyn_status cpdyn_kron(const cpdyn_operator* a, const cpdyn_operator* b, cpdyn_operator** out) {
  return guard([&] {
    need(a, b, out);
    *out = wrap(cpdyn::kron(a->op, b->op));
  });
}

CPDYN_API cpdyn_status cpdyn_partial_trace(const cpdyn_operator* op, const char* const* keep, size_t n_keep,
                                           cpdyn_operator** out) {
  return guard([&] {
    need(op, keep, out);
    const auto labels = labels_of(keep, n_keep);
    *out = wrap(cpdyn::partial_trace(op->op, labels));
  });
}

CPDYN_API cpdyn_status cpdyn_ad_u(const cpdyn_operator* u, const cpdyn_operator* op, cpdyn_operator** out) {
  return guard([&] {
    need(u, op, out);
    *out = wrap(cpdyn::ad_u(cpdyn::UnitaryOperator::from(u->op), op->op));
  });
}

CPDYN_API cpdyn_status cpdyn_eigenvalues(const cpdyn_operator* op, double* out, size_t len) {
  return guard([&] {
    need(op, out);
    if (len < static_cast<size_t>(op->op.dim())) cpdyn::fail(cpdyn::ErrorCode::DimensionMismatch, "output buffer too small");
    const cpdyn::RealVector ev = cpdyn::eig_hermitian(op->op).values;
    for (Eigen::Index i = 0; i < ev.size(); ++i) out[i] = ev(i);
  });
}

CPDYN_API cpdyn_status cpdyn_entropy(const cpdyn_operator* rho, double* out) {
  return guard([&] {
    need(rho, out);
    *out = cpdyn::von_neumann_entropy(cpdyn::DensityMatrix::from(rho->op));
  });
}

CPDYN_API cpdyn_status cpdyn_random_unitary(int dim, cpdyn_rng* rng, cpdyn_operator** out) {
  return guard([&] {
    need(rng, out);
    if (dim < 1) cpdyn::fail(cpdyn::ErrorCode::InvalidArgument, "dimension must be >= 1");
    *out = wrap(cpdyn::random_haar_unitary(dim, rng->rng).op());
  });
}

CPDYN_API cpdyn_status cpdyn_random_density(int dim, int rank, cpdyn_rng* rng, cpdyn_operator** out) {
  return guard([&] {
    need(rng, out);
    if (dim < 1) cpdyn::fail(cpdyn::ErrorCode::InvalidArgument, "dimension must be >= 1");
    *out = wrap(cpdyn::random_density(dim, rank, rng->rng).op());
  });
}

// ---- channels

CPDYN_API cpdyn_status cpdyn_channel_from_json(const char* json, cpdyn_channel** out) {
  return guard([&] {
    need(json, out);
    *out = new cpdyn_channel{cpdyn::channel_from_json(cpdyn::parse_json(json))};
  });
}

CPDYN_API cpdyn_status cpdyn_channel_to_json(const cpdyn_channel* ch, char** out) {
  return guard([&] {
    need(ch, out);
    *out = dup_string(cpdyn::channel_to_json(ch->map).dump());
  });
}

CPDYN_API void cpdyn_channel_free(cpdyn_channel* ch) { delete ch; }

CPDYN_API cpdyn_status cpdyn_channel_dims(const cpdyn_channel* ch, int* in_dim, int* out_dim) {
  return guard([&] {
    need(ch, in_dim, out_dim);
    *in_dim = ch->map.in_dim();
    *out_dim = ch->map.out_dim();
  });
}

CPDYN_API cpdyn_status cpdyn_channel_apply(const cpdyn_channel* ch, const cpdyn_operator* x, cpdyn_operator** out) {
  return guard([&] {
    need(ch, x, out);
    *out = wrap(plain_operator(ch->map.apply(x->op.matrix())));
  });
}

CPDYN_API cpdyn_status cpdyn_channel_min_choi_eigenvalue(const cpdyn_channel* ch, double* out) {
  return guard([&] {
    need(ch, out);
    *out = cpdyn::min_choi_eigenvalue(cpdyn::choi(ch->map));
  });
}

CPDYN_API cpdyn_status cpdyn_channel_is_cp(const cpdyn_channel* ch, double rel_tol, int* out) {
  return guard([&] {
    need(ch, out);
    if (!(rel_tol > 0.0)) cpdyn::fail(cpdyn::ErrorCode::InvalidArgument, "tolerance must be > 0");
    *out = cpdyn::is_cp(ch->map, rel_tol) ? 1 : 0;
  });
}

CPDYN_API cpdyn_status cpdyn_channel_tp_error(const cpdyn_channel* ch, double* out) {
  return guard([&] {
    need(ch, out);
    *out = cpdyn::tp_error(ch->map);
  });
}

CPDYN_API cpdyn_status cpdyn_channel_choi_json(const cpdyn_channel* ch, char** out) {
  return guard([&] {
    need(ch, out);
    *out = dup_string(cpdyn::choi_to_json(cpdyn::choi(ch->map)).dump());
  });
}

CPDYN_API cpdyn_status cpdyn_channel_kraus_json(const cpdyn_channel* ch, char** out) {
  return guard([&] {
    need(ch, out);
    *out = dup_string(cpdyn::kraus_to_json(cpdyn::kraus_from_choi(cpdyn::choi(ch->map))).dump());
  });
}

// ---- subspaces

CPDYN_API cpdyn_status cpdyn_subspace_full(int ds, int de, cpdyn_subspace** out) {
  return guard([&] {
    need(out);
    if (ds < 1 || de < 1) cpdyn::fail(cpdyn::ErrorCode::InvalidArgument, "dimensions must be >= 1");
    *out = new cpdyn_subspace{cpdyn::OperatorSubspace::full(ds, de)};
  });
}

CPDYN_API cpdyn_status cpdyn_subspace_span(const cpdyn_operator* const* ops, size_t n, int ds, int de,
                                           cpdyn_subspace** out) {
  return guard([&] {
    need(out);
    if (n > 0) need(ops);
    std::vector<cpdyn::Matrix> ms;
    for (size_t i = 0; i < n; ++i) {
      need(ops[i]);
      ms.push_back(ops[i]->op.matrix());
    }
    *out = new cpdyn_subspace{cpdyn::span_from_states(ms, ds, de)};
  });
}

CPDYN_API cpdyn_status cpdyn_subspace_from_json(const char* json, cpdyn_subspace** out) {
  return guard([&] {
    need(json, out);
    *out = new cpdyn_subspace{cpdyn::subspace_from_json(cpdyn::parse_json(json))};
  });
}

CPDYN_API cpdyn_status cpdyn_subspace_to_json(const cpdyn_subspace* v, char** out) {
  return guard([&] {
    need(v, out);
    *out = dup_string(cpdyn::subspace_to_json(v->v).dump());
  });
}

CPDYN_API void cpdyn_subspace_free(cpdyn_subspace* v) { delete v; }

CPDYN_API cpdyn_status cpdyn_subspace_kernel(const cpdyn_subspace* v, cpdyn_subspace** out) {
  return guard([&] {
    need(v, out);
    *out = new cpdyn_subspace{cpdyn::kernel_tr_e(v->v)};
  });
}

CPDYN_API cpdyn_status cpdyn_subspace_dims(const cpdyn_subspace* v, int* dim_v, int* dim_v0, int* dim_domain) {
  return guard([&] {
    need(v, dim_v, dim_v0, dim_domain);
    *dim_v = v->v.dim();
    *dim_v0 = cpdyn::kernel_tr_e(v->v).dim();
    *dim_domain = cpdyn::marginal_dim(v->v);
  });
}

CPDYN_API cpdyn_status cpdyn_subspace_is_u_consistent(const cpdyn_subspace* v, const cpdyn_operator* u, double tol,
                                                      int* out) {
  return guard([&] {
    need(v, u, out);
    if (!(tol > 0.0)) cpdyn::fail(cpdyn::ErrorCode::InvalidArgument, "tolerance must be > 0");
    if (u->op.dim() != v->v.ambient_dim()) cpdyn::fail(cpdyn::ErrorCode::DimensionMismatch, "unitary does not act on S (x) E");
    if (!cpdyn::is_unitary(u->op.matrix())) cpdyn::fail(cpdyn::ErrorCode::NotUnitary, "operator is not unitary");
    *out = cpdyn::is_u_consistent(v->v, u->op.matrix(), tol) ? 1 : 0;
  });
}

// ---- assignments

CPDYN_API cpdyn_status cpdyn_assignment_canonical(const cpdyn_subspace* v, cpdyn_assignment** out) {
  return guard([&] {
    need(v, out);
    *out = new cpdyn_assignment{cpdyn::canonical_assignment(v->v)};
  });
}

CPDYN_API cpdyn_status cpdyn_assignment_product(const cpdyn_operator* omega_e, int ds, cpdyn_assignment** out) {
  return guard([&] {
    need(omega_e, out);
    if (ds < 1) cpdyn::fail(cpdyn::ErrorCode::InvalidArgument, "dimension must be >= 1");
    const auto omega = cpdyn::DensityMatrix::from(omega_e->op);
    *out = new cpdyn_assignment{cpdyn::product_assignment(omega.matrix(), ds)};
  });
}

CPDYN_API cpdyn_status cpdyn_assignment_family(const cpdyn_family* fam, cpdyn_assignment** out) {
  return guard([&] {
    need(fam, out);
    *out = new cpdyn_assignment{cpdyn::family_assignment(fam->spec)};
  });
}

CPDYN_API cpdyn_status cpdyn_assignment_from_json(const char* json, cpdyn_assignment** out) {
  return guard([&] {
    need(json, out);
    *out = new cpdyn_assignment{cpdyn::assignment_from_json(cpdyn::parse_json(json))};
  });
}

CPDYN_API cpdyn_status cpdyn_assignment_to_json(const cpdyn_assignment* a, char** out) {
  return guard([&] {
    need(a, out);
    *out = dup_string(cpdyn::assignment_to_json(a->a).dump());
  });
}

CPDYN_API void cpdyn_assignment_free(cpdyn_assignment* a) { delete a; }

CPDYN_API cpdyn_status cpdyn_assignment_is_cp(const cpdyn_assignment* a, int* out) {
  return guard([&] {
    need(a, out);
    *out = a->a.cp() ? 1 : 0;
  });
}

CPDYN_API cpdyn_status cpdyn_assignment_min_choi_eigenvalue(const cpdyn_assignment* a, double* out) {
  return guard([&] {
    need(a, out);
    *out = a->a.min_choi_eigenvalue();
  });
}

CPDYN_API cpdyn_status cpdyn_reduced_dynamics(const cpdyn_operator* u, const cpdyn_assignment* a, cpdyn_channel** out) {
  return guard([&] {
    need(u, a, out);
    const auto unitary = cpdyn::UnitaryOperator::from(u->op);
    *out = new cpdyn_channel{cpdyn::reduced_dynamics(unitary.matrix(), a->a)};
  });
}

// ---- families

CPDYN_API cpdyn_status cpdyn_family_from_json(const char* json, cpdyn_family** out) {
  return guard([&] {
    need(json, out);
    *out = new cpdyn_family{cpdyn::family_from_json(cpdyn::parse_json(json))};
  });
}

CPDYN_API cpdyn_status cpdyn_family_to_json(const cpdyn_family* fam, char** out) {
  return guard([&] {
    need(fam, out);
    *out = dup_string(cpdyn::family_to_json(fam->spec).dump());
  });
}

CPDYN_API void cpdyn_family_free(cpdyn_family* fam) { delete fam; }

CPDYN_API cpdyn_status cpdyn_family_dims(const cpdyn_family* fam, int* ds, int* de) {
  return guard([&] {
    need(fam, ds, de);
    *ds = fam->spec.ds();
    *de = fam->spec.de();
  });
}

CPDYN_API cpdyn_status cpdyn_family_sample(const cpdyn_family* fam, cpdyn_rng* rng, cpdyn_operator** out) {
  return guard([&] {
    need(fam, rng, out);
    const auto params = cpdyn::random_params(fam->spec, rng->rng);
    *out = wrap(cpdyn::sample_member(fam->spec, params).op());
  });
}

CPDYN_API cpdyn_status cpdyn_family_subspace(const cpdyn_family* fam, cpdyn_subspace** out) {
  return guard([&] {
    need(fam, out);
    *out = new cpdyn_subspace{cpdyn::family_subspace(fam->spec)};
  });
}

// ---- information measures

CPDYN_API cpdyn_status cpdyn_mutual_information(const cpdyn_operator* rho, const char* const* part_x, size_t n,
                                                double* out) {
  return guard([&] {
    need(rho, part_x, out);
    const auto labels = labels_of(part_x, n);
    *out = cpdyn::mutual_information(cpdyn::DensityMatrix::from(rho->op), labels);
  });
}

CPDYN_API cpdyn_status cpdyn_conditional_mutual_information(const cpdyn_operator* rho, double* out) {
  return guard([&] {
    need(rho, out);
    *out = cpdyn::conditional_mutual_information(cpdyn::DensityMatrix::from(rho->op));
  });
}

CPDYN_API cpdyn_status cpdyn_dpi_check(const cpdyn_operator* rho_ase, const cpdyn_operator* u_se, double* i_before,
                                       double* i_after, double* delta) {
  return guard([&] {
    need(rho_ase, u_se, i_before, i_after, delta);
    const auto r = cpdyn::dpi_check(cpdyn::DensityMatrix::from(rho_ase->op), cpdyn::UnitaryOperator::from(u_se->op));
    *i_before = r.i_before;
    *i_after = r.i_after;
    *delta = r.delta;
  });
}

// ---- harness

CPDYN_API cpdyn_status cpdyn_run(const char* command, const char* config_json, char** report, int* pass) {
  return guard([&] {
    need(command, report, pass);
    const cpdyn::Json cfg = config_json ? cpdyn::parse_json(config_json) : cpdyn::Json::object();
    const cpdyn::RunConfig c = cpdyn::config_from_json(command, cfg);
    const cpdyn::RunReport r = cpdyn::run(c);
    *report = dup_string(r.to_jsonl());
    *pass = r.pass ? 1 : 0;
  });
}

}  // extern "C"
