#include "commfact/serialize.hpp"

namespace commfact {

using nlohmann::json;

namespace {

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

} // namespace

json certificate_json(const FactorizationCertificate& cert, const MatrixFiles& files) {
    json assignment = json::array();
    for (auto z : cert.assignment)
        assignment.push_back(complex_json(z));
    return {
        {"B", files.b},
        {"C", files.c},
        {"Q", files.q},
        {"m", cert.m},
        {"residual", cert.residual},
        {"opNormB", cert.op_norm_b},
        {"hsNormC", cert.hs_norm_c},
        {"hsNormA", cert.hs_norm_a},
        {"ratio", cert.ratio},
        {"bound", cert.bound},
        {"calibratedC", kCalibratedC},
        {"ratioSqMinusLogM", cert.ratio_sq_minus_log_m()},
        {"diagResidual", cert.diag_residual},
        {"normalityDefect", cert.normality_defect},
        {"seed", cert.seed},
        {"trials", cert.trials},
        {"bestTrial", cert.best_trial},
        {"optimizedAssignment", cert.optimized_assignment},
        {"prng", cert.prng},
        {"assignment", assignment},
        {"valid", cert.valid},
    };
}

json energy_json(const EnergyReport& report) {
    return {
        {"m", report.m},
        {"pairEnergy", report.pair_energy},
        {"expectation", report.expectation},
        {"boundValue", report.bound_value},
        {"calibratedA1", kCalibratedA1},
        {"empiricalA1", report.empirical_a1},
    };
}

json filtration_json(const Filtration& f, const LemmaReport& lemma) {
    return {
        {"dims", f.dims},
        {"totalDim", f.total_dim()},
        {"dimM", f.dim_m},
        {"rankTolerance", f.rank_tolerance},
        {"hypothesisResidual", lemma.hypothesis_residual},
        {"blockResidual", lemma.block_residual},
        {"invarianceResidual", lemma.invariance_residual},
        {"tolerances",
         {{"hypothesis", lemma.hypothesis_limit},
          {"structure", lemma.structure_limit},
          {"invariance", lemma.invariance_limit}}},
        {"hypothesisPass", lemma.hypothesis_pass},
        {"structurePass", lemma.structure_pass},
        {"invariancePass", lemma.invariance_pass},
        {"dimsPass", lemma.dims_pass},
        {"conclusionsApplicable", lemma.conclusions_applicable},
        {"pass", lemma.pass()},
    };
}

json lower_bound_json(const LowerBoundReport& report) {
    json trace = json::array();
    for (const auto& r : report.trace_records)
        trace.push_back({{"n", r.n},
                         {"lhs", r.lhs},
                         {"rhs", r.rhs},
                         {"slack", r.slack},
                         {"pass", r.pass},
                         {"normbdBound", r.normbd_bound},
                         {"normbdPass", r.normbd_pass}});
    json sums = json::array();
    for (const auto& r : report.partial_sums.records)
        sums.push_back({{"l", r.l}, {"partialSum", r.partial_sum}, {"bound", r.bound}, {"pass", r.pass}});
    json tri = json::array();
    for (const auto& r : report.partial_sums.triangular)
        tri.push_back({{"k", r.k},
                       {"l", r.l},
                       {"partialSum", r.partial_sum},
                       {"bound", r.bound},
                       {"pass", r.pass}});
    json hs = json::array();
    for (const auto& r : report.hs_lower.records)
        hs.push_back({{"m", r.m},
                      {"seed", r.seed},
                      {"ratio", r.ratio},
                      {"logM", r.log_m},
                      {"impliedK", r.implied_k},
                      {"impliedCPrime", r.implied_c_prime},
                      {"impliedLogOffset", r.implied_log_offset},
                      {"pass", r.pass}});
    return {
        {"m", report.m},
        {"seed", report.seed},
        {"trials", report.trials},
        {"normalization", report.normalization},
        {"residual", report.residual},
        {"ratio", report.ratio},
        {"filtration", filtration_json(report.filtration, report.lemma)},
        {"traceIneq", trace},
        {"traceIneqPass", report.trace_pass()},
        {"normbdPass", report.normbd_pass()},
        {"partialIsometries",
         {{"vIdentityResidual", report.isometries.v_identity_residual},
          {"wIdentityResidual", report.isometries.w_identity_residual},
          {"vNorm", report.isometries.v_norm},
          {"wNorm", report.isometries.w_norm},
          {"tracePass", report.isometries.trace_pass},
          {"pass", report.isometries.pass}}},
        {"partialSumChecks", sums},
        {"triangularChecks", tri},
        {"partialSumPass", report.partial_sums.pass()},
        {"quarterLogSum", report.quarter_log_sum},
        {"hsLowerBound", {{"window", report.hs_lower.window}, {"records", hs}}},
        {"hsLowerPass", report.hs_lower.pass()},
        {"strictPass", report.strict_pass()},
    };
}

} // namespace commfact
