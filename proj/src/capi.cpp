// Copyright 2026 trajkit contributors
//
// Licensed under the Apache License, Version 2.0 <LICENSE or
// https://www.apache.org/licenses/LICENSE-2.0>. This file may not be
// copied, modified, or distributed except according to those terms.

#include "trajkit.h"

#include <cmath>
#include <limits>
#include <span>
#include <string>

#include "trajkit/features_movement.hpp"
#include "trajkit/pipeline.hpp"
#include "trajkit/stats.hpp"

struct tk_engine {
  trajkit::RunConfig config;
  std::string last_error;
  std::string scratch;  // backing storage for returned strings
};

namespace {

tk_status classify_exception(std::string* message) {
  try {
    throw;
  } catch (const trajkit::MissingInputError& e) {
    if (message) *message = e.what();
    return TK_ERR_MISSING_INPUT;
  } catch (const trajkit::ValidationError& e) {
    if (message) *message = e.what();
    return TK_ERR_VALIDATION;
  } catch (const std::exception& e) {
    if (message) *message = e.what();
    return TK_ERR_INTERNAL;
  } catch (...) {
    if (message) *message = "unknown error";
    return TK_ERR_INTERNAL;
  }
}

template <typename Fn>
tk_status guarded(tk_engine* engine, Fn&& fn) {
  if (!engine) return TK_ERR_USAGE;
  engine->last_error.clear();
  try {
    fn();
    return TK_OK;
  } catch (...) {
    return classify_exception(&engine->last_error);
  }
}

template <typename Fn>
tk_status guarded_stateless(Fn&& fn) {
  try {
    fn();
    return TK_OK;
  } catch (...) {
    return classify_exception(nullptr);
  }
}

}  // namespace

extern "C" {

const char* tk_version(void) { return "0.1.0"; }

tk_engine* tk_engine_new(void) {
  try {
    return new tk_engine();
  } catch (...) {
    return nullptr;
  }
}

void tk_engine_free(tk_engine* engine) { delete engine; }

tk_status tk_engine_load_config(tk_engine* engine, const char* path) {
  if (!engine || !path) return TK_ERR_USAGE;
  return guarded(engine, [&] {
    engine->config = trajkit::RunConfig::load(path);
  });
}

tk_status tk_engine_set(tk_engine* engine, const char* key, const char* value) {
  if (!engine || !key || !value) return TK_ERR_USAGE;
  return guarded(engine, [&] { engine->config.set(key, value); });
}

tk_status tk_engine_apply_env(tk_engine* engine) {
  if (!engine) return TK_ERR_USAGE;
  return guarded(engine, [&] { engine->config.apply_env_overrides(); });
}

tk_status tk_engine_run(tk_engine* engine, const char* command) {
  if (!engine || !command) return TK_ERR_USAGE;
  return guarded(engine, [&] {
    trajkit::Pipeline pipeline(engine->config);
    pipeline.run(command);
  });
}

const char* tk_engine_error(const tk_engine* engine) {
  return engine ? engine->last_error.c_str() : "null engine";
}

const char* tk_engine_config_hash(tk_engine* engine) {
  if (!engine) return "";
  engine->scratch = engine->config.hash();
  return engine->scratch.c_str();
}

const char* tk_engine_config_json(tk_engine* engine) {
  if (!engine) return "";
  engine->scratch = engine->config.to_json_text();
  return engine->scratch.c_str();
}

tk_status tk_sample_entropy(const double* series, size_t n, int m,
                            double r_factor, double* value, int* is_defined) {
  if (!series || !value || !is_defined) return TK_ERR_USAGE;
  return guarded_stateless([&] {
    const auto result =
        trajkit::sample_entropy(std::span<const double>(series, n), m, r_factor);
    *is_defined = result.has_value() ? 1 : 0;
    *value = result.value_or(std::numeric_limits<double>::quiet_NaN());
  });
}

tk_status tk_levy_fit(const double* samples, size_t n, double* mu, double* c,
                      double* log_likelihood) {
  if (!samples || !mu || !c) return TK_ERR_USAGE;
  return guarded_stateless([&] {
    const auto fit = trajkit::fit_levy(std::span<const double>(samples, n));
    if (!fit) {
      throw trajkit::ValidationError(
          "fit needs at least 5 positive, non-degenerate samples");
    }
    *mu = fit->mu;
    *c = fit->c;
    if (log_likelihood) *log_likelihood = fit->log_likelihood;
  });
}

tk_status tk_wilcoxon_rank_sum(const double* a, size_t n_a, const double* b,
                               size_t n_b, double* statistic, double* z,
                               double* p_two_sided, int* exact) {
  if (!a || !b || !p_two_sided) return TK_ERR_USAGE;
  return guarded_stateless([&] {
    const auto result = trajkit::wilcoxon_rank_sum(
        std::span<const double>(a, n_a), std::span<const double>(b, n_b));
    if (statistic) *statistic = result.statistic;
    if (z) *z = result.z;
    *p_two_sided = result.p_two_sided;
    if (exact) {
      *exact = result.method == trajkit::RankSumResult::Method::Exact ? 1 : 0;
    }
  });
}

tk_status tk_wald_ci_halfwidth(double p_hat, size_t n, double* halfwidth) {
  if (!halfwidth) return TK_ERR_USAGE;
  return guarded_stateless(
      [&] { *halfwidth = trajkit::wald_ci_halfwidth(p_hat, n); });
}

tk_status tk_direction_change_angle(double x1, double y1, double x2, double y2,
                                    double x3, double y3, double* degrees) {
  if (!degrees) return TK_ERR_USAGE;
  return guarded_stateless([&] {
    *degrees = trajkit::direction_change_angle({x1, y1}, {x2, y2}, {x3, y3});
  });
}

}  // extern "C"
