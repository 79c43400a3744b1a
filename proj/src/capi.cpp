#include "pclass/pclass.h"

#include <cstring>
#include <new>
#include <string>

#include "pclass/campaign.hpp"
#include "pclass/error.hpp"
#include "pclass/ineq_single.hpp"
#include "pclass/means.hpp"
#include "pclass/serialize.hpp"
#include "pclass/sharpness.hpp"

struct pclass_operator {
  pclass::HermitianOperator op;
};
struct pclass_state {
  pclass::StateVector x;
};
struct pclass_function {
  pclass::ScalarFunction f;
};
struct pclass_report {
  pclass::InequalityReport r;
};

namespace {

thread_local std::string last_error;

pclass_status status_of(pclass::ErrorCode code) {
  using pclass::ErrorCode;
  switch (code) {
    case ErrorCode::invalid_input: return PCLASS_INVALID_INPUT;
    case ErrorCode::domain: return PCLASS_DOMAIN;
    case ErrorCode::negative_spectrum: return PCLASS_NEGATIVE_SPECTRUM;
    case ErrorCode::hypothesis: return PCLASS_HYPOTHESIS;
    case ErrorCode::degenerate: return PCLASS_DEGENERATE;
    case ErrorCode::search_failure: return PCLASS_SEARCH_FAILED;
    case ErrorCode::parse: return PCLASS_PARSE;
    case ErrorCode::unknown_check: return PCLASS_UNKNOWN_CHECK;
    case ErrorCode::unsatisfiable: return PCLASS_UNSATISFIABLE;
  }
  return PCLASS_INTERNAL;
}

template <class Fn>
pclass_status guarded(Fn&& fn) {
  try {
    fn();
    last_error.clear();
    return PCLASS_OK;
  } catch (const pclass::Error& e) {
    last_error = e.what();
    return status_of(e.code());
  } catch (const nlohmann::json::exception& e) {
    last_error = std::string("json: ") + e.what();
    return PCLASS_PARSE;
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return PCLASS_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return PCLASS_INTERNAL;
  } catch (...) {
    last_error = "unknown failure";
    return PCLASS_INTERNAL;
  }
}

void require(bool ok, const char* what) {
  if (!ok) pclass::fail(pclass::ErrorCode::invalid_input, what);
}

char* dup(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

nlohmann::json parse_json(const char* text) {
  require(text != nullptr, "json text is null");
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    pclass::fail(pclass::ErrorCode::parse, std::string("invalid JSON: ") + e.what());
  }
}

}  // namespace

extern "C" {

const char* pclass_last_error(void) { return last_error.c_str(); }

const char* pclass_status_name(pclass_status status) {
  switch (status) {
    case PCLASS_OK: return "ok";
    case PCLASS_INVALID_INPUT: return "invalid-input";
    case PCLASS_DOMAIN: return "domain";
    case PCLASS_NEGATIVE_SPECTRUM: return "negative-spectrum";
    case PCLASS_HYPOTHESIS: return "hypothesis";
    case PCLASS_DEGENERATE: return "degenerate";
    case PCLASS_SEARCH_FAILED: return "search-failed";
    case PCLASS_PARSE: return "parse";
    case PCLASS_UNKNOWN_CHECK: return "unknown-check";
    case PCLASS_UNSATISFIABLE: return "unsatisfiable";
    case PCLASS_INTERNAL: return "internal";
  }
  return "unknown-status";
}

const char* pclass_version(void) { return "1.0.0"; }
int pclass_schema_version(void) { return pclass::kReportSchemaVersion; }

const char* pclass_check_names(void) {
  static const std::string joined = [] {
    std::string s;
    for (const auto& n : pclass::check_names()) s += (s.empty() ? "" : ",") + n;
    return s;
  }();
  return joined.c_str();
}

void pclass_string_free(char* s) { delete[] s; }

pclass_status pclass_operator_create(size_t dim, const double* row_major, pclass_operator** out) {
  return guarded([&] {
    require(out && (row_major || dim == 0), "null argument");
    *out = new pclass_operator{pclass::HermitianOperator(dim, std::vector<double>(row_major, row_major + dim * dim))};
  });
}

pclass_status pclass_operator_from_json(const char* json, pclass_operator** out) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    *out = new pclass_operator{pclass::operator_from_json(parse_json(json))};
  });
}

pclass_status pclass_operator_random(double m, double M, size_t dim, uint64_t seed, pclass_operator** out) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    *out = new pclass_operator{pclass::random_hermitian(pclass::SpectrumWindow(m, M), dim, seed).op};
  });
}

void pclass_operator_free(pclass_operator* op) { delete op; }

size_t pclass_operator_dim(const pclass_operator* op) { return op ? op->op.dim() : 0; }

pclass_status pclass_operator_eigenvalues(const pclass_operator* op, double* out) {
  return guarded([&] {
    require(op && out, "null argument");
    const auto d = pclass::spectral_decompose(op->op);
    std::copy(d.eigenvalues.begin(), d.eigenvalues.end(), out);
  });
}

pclass_status pclass_operator_to_json(const pclass_operator* op, char** out) {
  return guarded([&] {
    require(op && out, "null argument");
    *out = dup(pclass::to_json(op->op).dump());
  });
}

pclass_status pclass_state_create(size_t dim, const double* coords, pclass_state** out) {
  return guarded([&] {
    require(out && (coords || dim == 0), "null argument");
    *out = new pclass_state{pclass::StateVector(std::vector<double>(coords, coords + dim))};
  });
}

pclass_status pclass_state_from_json(const char* json, pclass_state** out) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    *out = new pclass_state{pclass::state_from_json(parse_json(json))};
  });
}

pclass_status pclass_state_random(size_t dim, uint64_t seed, int unit, pclass_state** out) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    *out = new pclass_state{pclass::random_state(dim, seed, unit != 0)};
  });
}

void pclass_state_free(pclass_state* x) { delete x; }

pclass_status pclass_function_parse(const char* spec, double m, double M, pclass_function** out) {
  return guarded([&] {
    require(spec && out, "null argument");
    *out = new pclass_function{pclass::parse_function_spec(spec, pclass::SpectrumWindow(m, M))};
  });
}

pclass_status pclass_function_eval(const pclass_function* f, double t, double* out) {
  return guarded([&] {
    require(f && out, "null argument");
    *out = f->f(t);
  });
}

void pclass_function_free(pclass_function* f) { delete f; }

pclass_status pclass_check_jensen(const pclass_operator* c, const pclass_state* x, const pclass_function* f,
                                  pclass_report** out) {
  return guarded([&] {
    require(c && x && f && out, "null argument");
    *out = new pclass_report{pclass::jensen_pclass(c->op, x->x, f->f)};
  });
}

pclass_status pclass_check_maccarthy(const pclass_operator* c, const pclass_state* x, double r, pclass_report** out) {
  return guarded([&] {
    require(c && x && out, "null argument");
    *out = new pclass_report{pclass::holder_maccarthy_two_sided(c->op, x->x, r)};
  });
}

pclass_status pclass_check_mean_chain(size_t n, const double* values, const double* weights, double r,
                                      pclass_report** out) {
  return guarded([&] {
    require(values && out, "null argument");
    std::vector<double> v(values, values + n);
    auto data = weights ? pclass::WeightedData::normalized(std::move(v), std::vector<double>(weights, weights + n))
                        : pclass::WeightedData::uniform(std::move(v));
    *out = new pclass_report{pclass::mean_chain(data, r)};
  });
}

pclass_status pclass_jensen_ratio(const pclass_operator* c, const pclass_state* x, const pclass_function* f,
                                  double* out) {
  return guarded([&] {
    require(c && x && f && out, "null argument");
    *out = pclass::jensen_ratio(c->op, x->x, f->f);
  });
}

pclass_status pclass_refute_lambda(double lambda, char** out_json) {
  return guarded([&] {
    require(out_json != nullptr, "null argument");
    *out_json = dup(pclass::to_json(pclass::refute_lambda(lambda)).dump());
  });
}

pclass_status pclass_verify_instance(const char* check, const char* instance_json, pclass_report** out) {
  return guarded([&] {
    require(check && out, "null argument");
    *out = new pclass_report{pclass::run_instance(check, parse_json(instance_json))};
  });
}

pclass_status pclass_verify_random(const char* check, const char* options_json, uint64_t seed, uint64_t trial,
                                   pclass_report** out) {
  return guarded([&] {
    require(check && out, "null argument");
    const auto options = options_json ? parse_json(options_json) : nlohmann::json::object();
    *out = new pclass_report{pclass::run_random(check, options, seed, trial)};
  });
}

pclass_status pclass_sharpness(const char* config_json, char** out_json) {
  return guarded([&] {
    require(out_json != nullptr, "null argument");
    const auto j = config_json ? parse_json(config_json) : nlohmann::json::object();
    auto cfg = pclass::SearchConfig::for_family(j.value("family", std::string("qcap")));
    cfg.param_lo = j.value("param_lo", cfg.param_lo);
    cfg.param_hi = j.value("param_hi", cfg.param_hi);
    cfg.dim_min = j.value("dim_min", cfg.dim_min);
    cfg.dim_max = j.value("dim_max", cfg.dim_max);
    if (j.contains("window")) cfg.window = pclass::window_from_json(j.at("window"));
    cfg.restarts = j.value("restarts", cfg.restarts);
    cfg.steps = j.value("steps", cfg.steps);
    cfg.step_scale = j.value("step_scale", cfg.step_scale);
    cfg.seed = j.value("seed", cfg.seed);
    *out_json = dup(pclass::to_json(pclass::search_max_ratio(cfg)).dump());
  });
}

int pclass_report_holds(const pclass_report* r) { return r && r->r.holds() ? 1 : 0; }

int pclass_report_hypotheses_certified(const pclass_report* r) {
  return r && r->r.hypothesis_status() == pclass::HypothesisStatus::all_certified ? 1 : 0;
}

size_t pclass_report_chain_size(const pclass_report* r) { return r ? r->r.chain().size() : 0; }

double pclass_report_chain_value(const pclass_report* r, size_t i) {
  return r && i < r->r.chain().size() ? r->r.chain()[i].value : 0.0;
}

const char* pclass_report_chain_label(const pclass_report* r, size_t i) {
  return r && i < r->r.chain().size() ? r->r.chain()[i].label.c_str() : "";
}

double pclass_report_max_violation(const pclass_report* r) { return r ? r->r.max_violation() : 0.0; }

pclass_status pclass_report_to_json(const pclass_report* r, char** out) {
  return guarded([&] {
    require(r && out, "null argument");
    *out = dup(pclass::to_json(r->r).dump());
  });
}

void pclass_report_free(pclass_report* r) { delete r; }

}  // extern "C"
