#pragma once

#include <nlohmann/json.hpp>

#include "combtangle/gaussian_measures.hpp"
#include "combtangle/linear_dynamics.hpp"
#include "combtangle/readout.hpp"
#include "combtangle/semiclassical.hpp"
#include "combtangle/stochastic_oracle.hpp"
#include "combtangle/sweep.hpp"

namespace combtangle {

using Json = nlohmann::ordered_json;

Json to_json(const Matrix& m);  // row-major array of rows
Json to_json(const SemiclassicalState& s);
/// Flat object with keys E_rp, E_rq, E_pq, nu_*, S_pq, S_qp, ..., N_j.
Json to_json(const CorrelationReport& r);
Json to_json(const BogoliubovFrame& b);
Json point_json(const PointResult& point);
Json oracle_json(const EnsembleEstimate& est, const LyapunovSolution& reference);
/// Output-field covariances of probes on p and q, the measures they retain
/// and the reconstruction of V_pq from the unnormalized output.
Json readout_json(const PointResult& point, const ReadoutChannel& ch_p, const ReadoutChannel& ch_q);

/// 12 significant digits; NaN and infinities become null.
Json number(double x);

}  // namespace combtangle
