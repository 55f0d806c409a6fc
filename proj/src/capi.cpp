#include "ttessel.h"

#include <cstring>
#include <json.hpp>
#include <new>
#include <string>

#include "ttessel/errors.hpp"
#include "ttessel/json_io.hpp"
#include "ttessel/pl_inference.hpp"
#include "ttessel/point_process.hpp"
#include "ttessel/smf_chain.hpp"

namespace {

thread_local std::string g_last_error;

int fail(const char* msg, int code) {
  g_last_error = msg;
  return code;
}

template <typename Fn>
int guarded(Fn&& fn) {
  try {
    fn();
    return TTL_OK;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return TTL_ERROR;
  } catch (...) {
    g_last_error = "unknown error";
    return TTL_ERROR;
  }
}

char* copy_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

struct ttl_tessellation {
  ttessel::TTessellation t;
};

struct ttl_model {
  ttessel::ExponentialModel m;
};

struct ttl_chain {
  ttessel::SmfChain c;
};

struct ttl_pattern {
  ttessel::PointPattern p;
};

extern "C" {

const char* ttl_version(void) { return "0.1.0"; }

const char* ttl_last_error(void) { return g_last_error.c_str(); }

void ttl_string_free(char* s) { delete[] s; }

/* ---- tessellations ---------------------------------------------------- */

int ttl_tessellation_empty(const double* xy, int n_vertices, ttl_tessellation** out) {
  if (!xy || !out || n_vertices < 3) return fail("bad arguments", TTL_BAD_ARGUMENT);
  return guarded([&] {
    std::vector<ttessel::Point> vs(n_vertices);
    for (int i = 0; i < n_vertices; ++i) vs[i] = {xy[2 * i], xy[2 * i + 1]};
    *out = new ttl_tessellation{ttessel::TTessellation(ttessel::ConvexPolygon(std::move(vs)))};
  });
}

int ttl_tessellation_from_json(const char* text, ttl_tessellation** out) {
  if (!text || !out) return fail("bad arguments", TTL_BAD_ARGUMENT);
  return guarded([&] { *out = new ttl_tessellation{ttessel::tessellation_from_json(text)}; });
}

int ttl_tessellation_to_json(const ttl_tessellation* t, char** out) {
  if (!t || !out) return fail("bad arguments", TTL_BAD_ARGUMENT);
  return guarded([&] { *out = copy_string(ttessel::tessellation_to_json(t->t)); });
}

int ttl_tessellation_stats(const ttl_tessellation* t, double stats[6]) {
  if (!t || !stats) return fail("bad arguments", TTL_BAD_ARGUMENT);
  return guarded([&] {
    const ttessel::BasicStats st = t->t.statistics_basic();
    stats[0] = st.nseint;
    stats[1] = st.nnbseint;
    stats[2] = st.nbseint;
    stats[3] = st.u;
    stats[4] = st.a2;
    stats[5] = st.angle_sum;
  });
}

int ttl_tessellation_cell_count(const ttl_tessellation* t, int* out) {
  if (!t || !out) return fail("bad arguments", TTL_BAD_ARGUMENT);
  *out = t->t.cell_count();
  return TTL_OK;
}

void ttl_tessellation_free(ttl_tessellation* t) { delete t; }

/* ---- models ------------------------------------------------------------ */

int ttl_model_from_json(const char* config, ttl_model** out) {
  if (!config || !out) return fail("bad arguments", TTL_BAD_ARGUMENT);
  return guarded([&] { *out = new ttl_model{ttessel::model_from_json(config)}; });
}

int ttl_model_dim(const ttl_model* m, int* out) {
  if (!m || !out) return fail("bad arguments", TTL_BAD_ARGUMENT);
  *out = m->m.dimension();
  return TTL_OK;
}

int ttl_model_energy(const ttl_model* m, const ttl_tessellation* t, double* out) {
  if (!m || !t || !out) return fail("bad arguments", TTL_BAD_ARGUMENT);
  return guarded([&] { *out = m->m.energy(t->t); });
}

int ttl_model_statistics(const ttl_model* m, const ttl_tessellation* t, double* out) {
  if (!m || !t || !out) return fail("bad arguments", TTL_BAD_ARGUMENT);
  return guarded([&] {
    const auto stats = m->m.statistics(t->t);
    for (std::size_t i = 0; i < stats.size(); ++i) out[i] = stats[i];
  });
}

void ttl_model_free(ttl_model* m) { delete m; }

/* ---- chain -------------------------------------------------------------- */

int ttl_chain_new(const ttl_model* m, const ttl_tessellation* initial, double p_split,
                  double p_merge, double p_flip, uint64_t seed, ttl_chain** out) {
  if (!m || !initial || !out) return fail("bad arguments", TTL_BAD_ARGUMENT);
  return guarded([&] {
    *out = new ttl_chain{
        ttessel::SmfChain(m->m, initial->t, seed, ttessel::ProposalMix{p_split, p_merge, p_flip})};
  });
}

int ttl_chain_run(ttl_chain* c, int64_t iterations) {
  if (!c || iterations < 0) return fail("bad arguments", TTL_BAD_ARGUMENT);
  return guarded([&] { c->c.run(iterations); });
}

int ttl_chain_iteration(const ttl_chain* c, int64_t* out) {
  if (!c || !out) return fail("bad arguments", TTL_BAD_ARGUMENT);
  *out = c->c.iteration();
  return TTL_OK;
}

int ttl_chain_state_json(const ttl_chain* c, char** out) {
  if (!c || !out) return fail("bad arguments", TTL_BAD_ARGUMENT);
  return guarded([&] { *out = copy_string(ttessel::tessellation_to_json(c->c.state())); });
}

int ttl_chain_state_stats(const ttl_chain* c, double stats[6]) {
  if (!c || !stats) return fail("bad arguments", TTL_BAD_ARGUMENT);
  return guarded([&] {
    const ttessel::BasicStats st = c->c.state().cached_stats();
    stats[0] = st.nseint;
    stats[1] = st.nnbseint;
    stats[2] = st.nbseint;
    stats[3] = st.u;
    stats[4] = st.a2;
    stats[5] = st.angle_sum;
  });
}

int ttl_chain_energy(const ttl_chain* c, double* out) {
  if (!c || !out) return fail("bad arguments", TTL_BAD_ARGUMENT);
  *out = c->c.energy();
  return TTL_OK;
}

int ttl_chain_trace_size(const ttl_chain* c, int64_t* out) {
  if (!c || !out) return fail("bad arguments", TTL_BAD_ARGUMENT);
  *out = static_cast<int64_t>(c->c.trace().size());
  return TTL_OK;
}

int ttl_chain_trace_row(const ttl_chain* c, int64_t index, double row[6]) {
  if (!c || !row) return fail("bad arguments", TTL_BAD_ARGUMENT);
  if (index < 0 || index >= static_cast<int64_t>(c->c.trace().size())) {
    return fail("trace index out of range", TTL_BAD_ARGUMENT);
  }
  const ttessel::TraceRow& r = c->c.trace()[index];
  row[0] = static_cast<double>(r.iteration);
  row[1] = r.energy;
  row[2] = r.nseint;
  row[3] = r.nnbseint;
  row[4] = r.nbseint;
  row[5] = static_cast<double>(r.accepted_move);
  return TTL_OK;
}

int ttl_chain_set_trace_enabled(ttl_chain* c, int enabled) {
  if (!c) return fail("bad arguments", TTL_BAD_ARGUMENT);
  c->c.set_trace_enabled(enabled != 0);
  return TTL_OK;
}

int ttl_chain_clear_trace(ttl_chain* c) {
  if (!c) return fail("bad arguments", TTL_BAD_ARGUMENT);
  c->c.clear_trace();
  return TTL_OK;
}

int ttl_chain_sampling_period(ttl_chain* c, double renewal_fraction, int64_t max_period,
                              int64_t* out) {
  if (!c || !out) return fail("bad arguments", TTL_BAD_ARGUMENT);
  return guarded([&] {
    ttessel::SamplingPeriodOptions opts;
    if (max_period > 0) opts.max_period = max_period;
    *out = c->c.sampling_period(renewal_fraction, opts);
  });
}

void ttl_chain_free(ttl_chain* c) { delete c; }

/* ---- inference ----------------------------------------------------------- */

int ttl_crtt_mple(const ttl_tessellation* t, double* out) {
  if (!t || !out) return fail("bad arguments", TTL_BAD_ARGUMENT);
  return guarded([&] { *out = ttessel::crtt_mple(t->t); });
}

int ttl_nois(const ttl_model* m, const ttl_tessellation* t, const char* config, uint64_t seed,
             char** result_json) {
  if (!m || !t || !result_json) return fail("bad arguments", TTL_BAD_ARGUMENT);
  return guarded([&] {
    ttessel::NoisConfig cfg;
    if (config && *config) {
      const nlohmann::json doc = nlohmann::json::parse(config);
      if (doc.contains("epsilon")) cfg.epsilon = doc["epsilon"].get<double>();
      if (doc.contains("delta")) cfg.delta = doc["delta"].get<double>();
      if (doc.contains("max_iterations")) cfg.max_iterations = doc["max_iterations"].get<int>();
      if (doc.contains("initial_theta")) {
        if (doc["initial_theta"].is_string() &&
            doc["initial_theta"].get<std::string>() == "crtt-start") {
          cfg.crtt_start = true;
        } else {
          cfg.initial_theta = doc["initial_theta"].get<std::vector<double>>();
        }
      }
    }
    ttessel::Rng rng(seed);
    const ttessel::NoisResult res = ttessel::nois(m->m, t->t, cfg, rng);
    nlohmann::json doc;
    doc["theta_hat"] = res.theta;
    doc["iterations"] = res.iterations;
    doc["converged"] = res.converged;
    doc["trace"] = nlohmann::json::array();
    for (const auto& it : res.trace) {
      doc["trace"].push_back({{"theta", it.theta}, {"lpl", it.lpl}});
    }
    *result_json = copy_string(doc.dump());
  });
}

/* ---- point processes ------------------------------------------------------ */

int ttl_pattern_new(const double* window_xy, int n_window, const double* points_xy, int n_points,
                    ttl_pattern** out) {
  if (!window_xy || !out || n_window < 3 || n_points < 0 || (n_points > 0 && !points_xy)) {
    return fail("bad arguments", TTL_BAD_ARGUMENT);
  }
  return guarded([&] {
    std::vector<ttessel::Point> w(n_window);
    for (int i = 0; i < n_window; ++i) w[i] = {window_xy[2 * i], window_xy[2 * i + 1]};
    std::vector<ttessel::Point> pts(n_points);
    for (int i = 0; i < n_points; ++i) pts[i] = {points_xy[2 * i], points_xy[2 * i + 1]};
    *out = new ttl_pattern{
        ttessel::PointPattern(ttessel::ConvexPolygon(std::move(w)), std::move(pts))};
  });
}

int ttl_pattern_size(const ttl_pattern* p, int* out) {
  if (!p || !out) return fail("bad arguments", TTL_BAD_ARGUMENT);
  *out = p->p.size();
  return TTL_OK;
}

int ttl_pattern_window_area(const ttl_pattern* p, double* out) {
  if (!p || !out) return fail("bad arguments", TTL_BAD_ARGUMENT);
  return guarded([&] { *out = p->p.window.area(); });
}

void ttl_pattern_free(ttl_pattern* p) { delete p; }

int ttl_pp_lpl(const char* model_config, const ttl_pattern* p, const double* theta, int dim,
               int grid_resolution, double* out) {
  if (!model_config || !p || !theta || !out || dim < 1) {
    return fail("bad arguments", TTL_BAD_ARGUMENT);
  }
  return guarded([&] {
    const ttessel::PpModel model = ttessel::pp_model_from_json(model_config);
    if (model.dimension() != dim) throw ttessel::ValidationError("theta dimension mismatch");
    *out = ttessel::lpl_pp(model, p->p, std::vector<double>(theta, theta + dim),
                           grid_resolution > 0 ? grid_resolution : 128);
  });
}

namespace {

char* fit_to_json(const ttessel::PpFit& fit) {
  nlohmann::json doc;
  doc["theta_hat"] = fit.theta;
  doc["iterations"] = fit.iterations;
  doc["converged"] = fit.converged;
  return copy_string(doc.dump());
}

}  // namespace

int ttl_pp_fit_mple(const char* model_config, const ttl_pattern* p, int grid_resolution,
                    char** result_json) {
  if (!model_config || !p || !result_json) return fail("bad arguments", TTL_BAD_ARGUMENT);
  return guarded([&] {
    const ttessel::PpModel model = ttessel::pp_model_from_json(model_config);
    *result_json =
        fit_to_json(ttessel::fit_mple(model, p->p, grid_resolution > 0 ? grid_resolution : 128));
  });
}

int ttl_pp_fit_logistic(const char* model_config, const ttl_pattern* p, double rho, uint64_t seed,
                        char** result_json) {
  if (!model_config || !p || !result_json) return fail("bad arguments", TTL_BAD_ARGUMENT);
  return guarded([&] {
    const ttessel::PpModel model = ttessel::pp_model_from_json(model_config);
    ttessel::Rng rng(seed);
    *result_json = fit_to_json(ttessel::fit_logistic(model, p->p, rho, rng));
  });
}

}  // extern "C"
