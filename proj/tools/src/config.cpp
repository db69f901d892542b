#include "scgbp_cli/config.hpp"

#include "scgbp/io.hpp"

#include <json.hpp>

#include <set>

namespace scgbp::cli {

using nlohmann::json;

namespace {

// Reads obj[key] into out when present. Each reader records the keys it
// consumed so leftovers can be reported as unknown.
class Reader {
public:
    Reader(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
        if (!obj_.is_object()) throw ConfigError(path_ + " must be an object");
    }
    ~Reader() = default;

    template <class T>
    void get(const char* key, T& out) {
        seen_.insert(key);
        if (!obj_.contains(key)) return;
        try {
            out = obj_.at(key).get<T>();
        } catch (const json::exception&) {
            throw ConfigError(field(key) + " has the wrong type");
        }
    }

    Reader sub(const char* key) {
        seen_.insert(key);
        static const json empty = json::object();
        return Reader(obj_.contains(key) ? obj_.at(key) : empty, field(key));
    }

    std::string field(const char* key) const { return path_.empty() ? key : path_ + "." + key; }

    void finish() const {
        for (const auto& [k, v] : obj_.items())
            if (!seen_.count(k)) throw ConfigError(field(k.c_str()) + " is not a known setting");
    }

private:
    const json& obj_;
    std::string path_;
    std::set<std::string> seen_;
};

const char* init_name(VmdInit i) {
    switch (i) {
    case VmdInit::Uniform: return "uniform";
    case VmdInit::Zero: return "zero";
    case VmdInit::Random: return "random";
    }
    return "uniform";
}

VmdInit parse_init(const std::string& s, const std::string& field) {
    if (s == "uniform") return VmdInit::Uniform;
    if (s == "zero") return VmdInit::Zero;
    if (s == "random") return VmdInit::Random;
    throw ConfigError(field + " must be one of uniform, zero, random");
}

const char* hr_name(HrProfileKind k) {
    switch (k) {
    case HrProfileKind::Constant: return "constant";
    case HrProfileKind::Sweep: return "sweep";
    case HrProfileKind::Sinusoid: return "sinusoid";
    }
    return "constant";
}

HrProfileKind parse_hr(const std::string& s, const std::string& field) {
    if (s == "constant") return HrProfileKind::Constant;
    if (s == "sweep") return HrProfileKind::Sweep;
    if (s == "sinusoid") return HrProfileKind::Sinusoid;
    throw ConfigError(field + " must be one of constant, sweep, sinusoid");
}

json vmd_json(const VmdParams& v) {
    return {{"k", v.k}, {"alpha", v.alpha}, {"tau_dual", v.tau_dual},
            {"tol", v.tol}, {"max_iter", v.max_iter}, {"init", init_name(v.init)}};
}

void read_vmd(Reader r, VmdParams& v) {
    r.get("k", v.k);
    r.get("alpha", v.alpha);
    r.get("tau_dual", v.tau_dual);
    r.get("tol", v.tol);
    r.get("max_iter", v.max_iter);
    std::string init = init_name(v.init);
    r.get("init", init);
    v.init = parse_init(init, r.field("init"));
    r.finish();
}

json coeffs_json(const BpLawCoeffs& c) { return {{"a", c.a}, {"b", c.b}, {"c", c.c}}; }

void read_coeffs(Reader r, BpLawCoeffs& c) {
    r.get("a", c.a);
    r.get("b", c.b);
    r.get("c", c.c);
    r.finish();
}

json to_json(const PipelineConfig& c) {
    const auto& s = c.synth;
    const auto& a = c.fiducial.ao;
    json j;
    j["seed"] = c.seed;
    j["synth"] = {
        {"duration_s", s.duration_s},
        {"fs_hz", s.fs},
        {"hr", {{"kind", hr_name(s.hr.kind)}, {"lo_bpm", s.hr.lo_bpm}, {"hi_bpm", s.hr.hi_bpm},
                {"period_s", s.hr.period_s}}},
        {"lvet", {{"base_ms", s.lvet.base_ms}, {"slope_ms_per_bpm", s.lvet.slope_ms_per_bpm},
                  {"jitter_ms", s.lvet.jitter_ms}, {"min_rr_frac", s.lvet.min_rr_frac},
                  {"max_rr_frac", s.lvet.max_rr_frac}}},
        {"morphology", {{"ao_amp", s.morphology.ao_amp}, {"ao_freq_hz", s.morphology.ao_freq_hz},
                        {"ao_width_ms", s.morphology.ao_width_ms}, {"ac_amp", s.morphology.ac_amp},
                        {"ac_freq_hz", s.morphology.ac_freq_hz}, {"ac_width_ms", s.morphology.ac_width_ms},
                        {"beat_amp_jitter", s.morphology.beat_amp_jitter}}},
        {"noise_snr_db", s.noise_snr_db ? json(*s.noise_snr_db) : json(nullptr)},
        {"wander", {{"amp", s.wander.amp}, {"freq_hz", s.wander.freq_hz}}},
        {"bp", {{"sbp", coeffs_json(s.bp.sbp)}, {"dbp", coeffs_json(s.bp.dbp)}, {"sigma_mmHg", s.bp.sigma_mmHg}}},
        {"abp", {{"transit_ms", s.abp.transit_ms}, {"rise_ms", s.abp.rise_ms}, {"decay_ms", s.abp.decay_ms}}},
    };
    j["vmd_stage1"] = vmd_json(a.stage1);
    j["vmd_stage2"] = vmd_json(a.stage2);
    j["ao_detect"] = {
        {"detrend_cutoff_hz", a.detrend_cutoff_hz},
        {"gauss_len_ms", a.gauss_len_ms},
        {"gauss_sigma", a.gauss_sigma},
        {"rho", a.rho},
        {"env_tau_mode", a.env_tau.mode == EnvThresholdMode::Relative ? "relative" : "absolute"},
        {"env_tau", a.env_tau.value},
        {"cce_window_ms", a.cce_window_ms},
        {"cce_min_separation_ms", a.cce_min_separation_ms},
        {"cce_min_rel_height", a.cce_min_rel_height},
        {"cce_min_prominence", a.cce_min_prominence},
        {"ao_gate_ms", a.ao_gate_ms},
        {"guard_ms", a.guard_ms},
    };
    j["peak_correct"] = {{"th_frac", c.fiducial.correction.th_frac},
                         {"tau_search_ms", c.fiducial.correction.tau_search_ms},
                         {"max_passes", c.fiducial.correction.max_passes}};
    j["pac_detect"] = {{"hp_cutoff_hz", c.fiducial.pac.hp_cutoff_hz},
                       {"hp_order", c.fiducial.pac.hp_order},
                       {"ma_window_ms", c.fiducial.pac.ma_window_ms}};
    j["bp_model"] = {{"calibration_frac", c.calibration_frac}};
    j["metrics"] = {{"ieee_max_abs_me_mmHg", c.bound.max_abs_me}, {"ieee_max_std_mmHg", c.bound.max_std}};
    return j;
}

void from_json_root(const json& j, PipelineConfig& c) {
    Reader root(j, "");
    root.get("seed", c.seed);

    {
        auto& s = c.synth;
        Reader r = root.sub("synth");
        r.get("duration_s", s.duration_s);
        r.get("fs_hz", s.fs);
        {
            Reader h = r.sub("hr");
            std::string kind = hr_name(s.hr.kind);
            h.get("kind", kind);
            s.hr.kind = parse_hr(kind, h.field("kind"));
            h.get("lo_bpm", s.hr.lo_bpm);
            h.get("hi_bpm", s.hr.hi_bpm);
            h.get("period_s", s.hr.period_s);
            h.finish();
        }
        {
            Reader l = r.sub("lvet");
            l.get("base_ms", s.lvet.base_ms);
            l.get("slope_ms_per_bpm", s.lvet.slope_ms_per_bpm);
            l.get("jitter_ms", s.lvet.jitter_ms);
            l.get("min_rr_frac", s.lvet.min_rr_frac);
            l.get("max_rr_frac", s.lvet.max_rr_frac);
            l.finish();
        }
        {
            Reader m = r.sub("morphology");
            m.get("ao_amp", s.morphology.ao_amp);
            m.get("ao_freq_hz", s.morphology.ao_freq_hz);
            m.get("ao_width_ms", s.morphology.ao_width_ms);
            m.get("ac_amp", s.morphology.ac_amp);
            m.get("ac_freq_hz", s.morphology.ac_freq_hz);
            m.get("ac_width_ms", s.morphology.ac_width_ms);
            m.get("beat_amp_jitter", s.morphology.beat_amp_jitter);
            m.finish();
        }
        {
            // null switches the noise off
            json snr = s.noise_snr_db ? json(*s.noise_snr_db) : json(nullptr);
            r.get("noise_snr_db", snr);
            if (snr.is_null()) s.noise_snr_db.reset();
            else if (snr.is_number()) s.noise_snr_db = snr.get<double>();
            else throw ConfigError(r.field("noise_snr_db") + " must be a number or null");
        }
        {
            Reader w = r.sub("wander");
            w.get("amp", s.wander.amp);
            w.get("freq_hz", s.wander.freq_hz);
            w.finish();
        }
        {
            Reader b = r.sub("bp");
            read_coeffs(b.sub("sbp"), s.bp.sbp);
            read_coeffs(b.sub("dbp"), s.bp.dbp);
            b.get("sigma_mmHg", s.bp.sigma_mmHg);
            b.finish();
        }
        {
            Reader a = r.sub("abp");
            a.get("transit_ms", s.abp.transit_ms);
            a.get("rise_ms", s.abp.rise_ms);
            a.get("decay_ms", s.abp.decay_ms);
            a.finish();
        }
        r.finish();
    }

    auto& a = c.fiducial.ao;
    read_vmd(root.sub("vmd_stage1"), a.stage1);
    read_vmd(root.sub("vmd_stage2"), a.stage2);
    {
        Reader r = root.sub("ao_detect");
        r.get("detrend_cutoff_hz", a.detrend_cutoff_hz);
        r.get("gauss_len_ms", a.gauss_len_ms);
        r.get("gauss_sigma", a.gauss_sigma);
        r.get("rho", a.rho);
        std::string mode = a.env_tau.mode == EnvThresholdMode::Relative ? "relative" : "absolute";
        r.get("env_tau_mode", mode);
        if (mode == "relative") a.env_tau.mode = EnvThresholdMode::Relative;
        else if (mode == "absolute") a.env_tau.mode = EnvThresholdMode::Absolute;
        else throw ConfigError(r.field("env_tau_mode") + " must be relative or absolute");
        r.get("env_tau", a.env_tau.value);
        r.get("cce_window_ms", a.cce_window_ms);
        r.get("cce_min_separation_ms", a.cce_min_separation_ms);
        r.get("cce_min_rel_height", a.cce_min_rel_height);
        r.get("cce_min_prominence", a.cce_min_prominence);
        r.get("ao_gate_ms", a.ao_gate_ms);
        r.get("guard_ms", a.guard_ms);
        r.finish();
    }
    {
        Reader r = root.sub("peak_correct");
        r.get("th_frac", c.fiducial.correction.th_frac);
        r.get("tau_search_ms", c.fiducial.correction.tau_search_ms);
        r.get("max_passes", c.fiducial.correction.max_passes);
        r.finish();
    }
    {
        Reader r = root.sub("pac_detect");
        r.get("hp_cutoff_hz", c.fiducial.pac.hp_cutoff_hz);
        r.get("hp_order", c.fiducial.pac.hp_order);
        r.get("ma_window_ms", c.fiducial.pac.ma_window_ms);
        r.finish();
    }
    {
        Reader r = root.sub("bp_model");
        r.get("calibration_frac", c.calibration_frac);
        r.finish();
    }
    {
        Reader r = root.sub("metrics");
        r.get("ieee_max_abs_me_mmHg", c.bound.max_abs_me);
        r.get("ieee_max_std_mmHg", c.bound.max_std);
        r.finish();
    }
    root.finish();
}

// Module validators say "vmd.k"; in the config the block is named per stage.
void validate_as(const std::string& block, const std::string& module_prefix, auto&& fn) {
    try {
        fn();
    } catch (const std::invalid_argument& e) {
        std::string msg = e.what();
        if (msg.rfind(module_prefix, 0) == 0) msg = block + msg.substr(module_prefix.size());
        throw ConfigError(msg);
    }
}

} // namespace

void PipelineConfig::apply_seed() {
    synth.seed = seed;
    fiducial.ao.stage1.seed = seed;
    fiducial.ao.stage2.seed = seed;
}

void PipelineConfig::validate() const {
    validate_as("synth.", "synth.", [&] { synth.validate(); });
    validate_as("vmd_stage1.", "vmd.", [&] { fiducial.ao.stage1.validate(); });
    validate_as("vmd_stage2.", "vmd.", [&] { fiducial.ao.stage2.validate(); });
    validate_as("ao_detect.", "ao_detect.", [&] { fiducial.ao.validate(); });
    validate_as("peak_correct.", "peak_correct.", [&] { fiducial.correction.validate(); });
    validate_as("pac_detect.", "pac_detect.", [&] { fiducial.pac.validate(); });
    if (!(calibration_frac > 0.0 && calibration_frac < 1.0))
        throw ConfigError("bp_model.calibration_frac must lie in (0, 1)");
    if (!(bound.max_abs_me > 0.0)) throw ConfigError("metrics.ieee_max_abs_me_mmHg must be > 0");
    if (!(bound.max_std > 0.0)) throw ConfigError("metrics.ieee_max_std_mmHg must be > 0");
}

PipelineConfig parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    PipelineConfig c;
    from_json_root(j, c);
    c.apply_seed();
    c.validate();
    return c;
}

PipelineConfig load_config(const std::filesystem::path& path) {
    std::string text;
    try {
        text = io::read_text(path);
    } catch (const io::FormatError& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    return parse_config(text);
}

std::string dump_config(const PipelineConfig& cfg) { return to_json(cfg).dump(2) + "\n"; }

} // namespace scgbp::cli
