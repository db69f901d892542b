#include "scgbp/pipeline.hpp"

namespace scgbp {

FiducialResult detect_fiducials(const SampledSignal& scg, const FiducialParams& p, bool keep_stages) {
    FiducialResult r;
    r.ao_raw = detect_ao(scg, p.ao, &r.stages);
    const SampledSignal detrended = scg.with_samples(r.stages.detrended);

    if (r.ao_raw.size() >= 3) {
        auto [corrected, report] = correct_peaks(detrended, r.ao_raw, p.correction);
        r.ao = std::move(corrected);
        r.correction = std::move(report);
    } else {
        r.ao = r.ao_raw;
    }
    if (r.ao.size() < 2) throw NoCardiacStructure("fewer than two aortic openings after correction");

    r.pac = detect_pac(detrended, r.ao, p.pac);
    r.beats = extract_beats(r.ao, r.pac, scg.fs());
    if (!keep_stages) r.stages = {};
    return r;
}

namespace {

TargetOutcome run_target(const CalibrationSet& train, const CalibrationSet& test, BpTarget target,
                         const IeeeBound& bound) {
    TargetOutcome out;
    out.model = calibrate(train, target);
    out.estimated = estimate(out.model, test.beats);
    for (const auto& r : test.refs) out.reference.push_back(reference_value(r, target));
    if (!out.estimated.empty()) out.report = evaluate(out.estimated, out.reference, bound);
    return out;
}

} // namespace

ProtocolOutcome run_bp_protocol(const FiducialResult& fiducials, const SampledSignal& abp, double calibration_frac,
                                const IeeeBound& bound) {
    const auto refs = reference_bp(abp, fiducials.ao);
    const auto paired = pair_with_references(fiducials.beats.beats, refs);
    auto [train, test] = split_calibration(paired, calibration_frac);

    ProtocolOutcome out;
    out.n_paired = paired.beats.size();
    out.n_train = train.beats.size();
    out.n_test = test.beats.size();
    out.sbp = run_target(train, test, BpTarget::Sbp, bound);
    out.dbp = run_target(train, test, BpTarget::Dbp, bound);
    return out;
}

} // namespace scgbp
