#include "scgbp_cli/commands.hpp"

#include "scgbp_cli/config.hpp"

#include "scgbp/io.hpp"
#include "scgbp/pipeline.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <functional>
#include <optional>
#include <thread>

namespace scgbp::cli {

namespace fs = std::filesystem;

namespace {

// Input that is readable but unusable; reported with exit code 1.
class ProcessingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Globals {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    unsigned jobs = 1;
    bool print_config = false;
    bool dump_stages = false;
};

struct SynthOpts {
    std::string out;
    std::string subject;
    int count = 1;
    std::optional<double> duration_s;
};

struct DetectOpts {
    std::vector<std::string> recordings;
    std::string out;
    std::string out_dir;
    std::optional<double> fs;
};

struct CalibrateOpts {
    std::string beats;
    std::string recording;
    std::string target;
    std::optional<double> frac;
    std::string out;
    std::string test_references;
    std::optional<double> fs;
};

struct EstimateOpts {
    std::string beats;
    std::string model;
    std::string out;
    std::string split = "all";
    std::string recording;
    std::optional<double> fs;
};

struct EvaluateOpts {
    std::string predictions;
    std::string references;
    std::string out;
    std::string bland_altman;
    std::string regression;
};

// Runs task(i) for i in [0, n) on up to `jobs` threads. Returns one error
// message per failed item, in item order.
std::vector<std::string> parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& task) {
    std::vector<std::string> errors(n);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                task(i);
            } catch (const std::exception& e) {
                errors[i] = e.what();
            }
        }
    };
    const unsigned threads = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(n)));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    return errors;
}

int report_errors(const std::vector<std::string>& errors, const std::vector<std::string>& names, std::ostream& err) {
    int rc = kExitOk;
    for (std::size_t i = 0; i < errors.size(); ++i) {
        if (errors[i].empty()) continue;
        err << "error: " << names[i] << ": " << errors[i] << "\n";
        rc = kExitFailure;
    }
    return rc;
}

std::string numbered(const std::string& prefix, int i, int count) {
    if (count == 1) return prefix;
    char buf[16];
    std::snprintf(buf, sizeof buf, "_%02d", i + 1);
    return prefix + buf;
}

int cmd_synth(const PipelineConfig& base, const SynthOpts& o, const Globals& g, std::ostream& err) {
    std::vector<std::string> prefixes;
    for (int i = 0; i < o.count; ++i) prefixes.push_back(numbered(o.out, i, o.count));
    const auto errors = parallel_for(prefixes.size(), g.jobs, [&](std::size_t i) {
        SynthConfig cfg = base.synth;
        cfg.seed = base.seed + i;
        const fs::path prefix = prefixes[i];
        const std::string subject = o.subject.empty() ? prefix.filename().string()
                                                      : numbered(o.subject, static_cast<int>(i), o.count);
        const SynthOutput s = generate(cfg, subject);
        io::write_recording(s.recording, prefix);
        fs::path truth = prefix;
        truth += ".truth.json";
        io::write_truth(s.truth, truth);
    });
    return report_errors(errors, prefixes, err);
}

fs::path beats_path_for(const DetectOpts& o, const fs::path& recording) {
    if (!o.out.empty()) return o.out;
    fs::path p = fs::path(o.out_dir) / recording.stem();
    p += ".beats.csv";
    return p;
}

fs::path sibling(const fs::path& beats, const std::string& suffix) {
    fs::path p = beats;
    p.replace_extension();
    p += suffix;
    return p;
}

int cmd_detect(const PipelineConfig& cfg, const DetectOpts& o, const Globals& g, std::ostream& err) {
    if (o.recordings.size() > 1 && !o.out.empty())
        throw CLI::ValidationError("--out", "takes a single recording; use --out-dir for several");
    if (o.out.empty() && o.out_dir.empty()) throw CLI::ValidationError("--out", "one of --out or --out-dir is required");
    if (!o.out_dir.empty()) fs::create_directories(o.out_dir);

    const auto errors = parallel_for(o.recordings.size(), g.jobs, [&](std::size_t i) {
        const fs::path in = o.recordings[i];
        const Recording rec = io::parse_recording(in, o.fs);
        const FiducialResult r = detect_fiducials(rec.scg_z, cfg.fiducial, g.dump_stages);
        const fs::path beats = beats_path_for(o, in);
        io::write_beats(beats, r.beats.beats, rec.fs());
        io::write_detection_report(sibling(beats, ".report.json"), rec.subject_id, r.ao_raw, r.ao, r.correction,
                                   r.pac, r.beats, rec.fs());
        if (g.dump_stages) io::write_stages(sibling(beats, ".stages"), r.stages, rec.fs());
    });
    return report_errors(errors, o.recordings, err);
}

int cmd_calibrate(const PipelineConfig& cfg, const CalibrateOpts& o) {
    const BpTarget target = parse_target(o.target);
    const double frac = o.frac.value_or(cfg.calibration_frac);
    if (!(frac > 0.0 && frac < 1.0)) throw ConfigError("bp_model.calibration_frac must lie in (0, 1)");

    const Recording rec = io::parse_recording(o.recording, o.fs);
    if (!rec.abp) throw ProcessingError("reference channel required: " + o.recording + " has no abp column");
    const auto beats = io::read_beats(o.beats, rec.fs());
    const auto refs = reference_bp(*rec.abp, beats);
    const auto paired = pair_with_references(beats, refs);
    if (paired.beats.size() < 3)
        throw ProcessingError("only " + std::to_string(paired.beats.size()) + " beats have a usable reference");

    auto [train, test] = split_calibration(paired, frac);
    const BpModel model = calibrate(train, target);
    io::write_model(o.out, model, rec.subject_id);

    if (!o.test_references.empty()) {
        std::vector<io::ReferenceRow> rows;
        for (const auto& r : test.refs) rows.push_back({r.beat_index, reference_value(r, target)});
        io::write_references(o.test_references, rows);
    }
    return kExitOk;
}

int cmd_estimate(const EstimateOpts& o) {
    std::string subject;
    const BpModel model = io::read_model(o.model, &subject);

    std::optional<Recording> rec;
    std::optional<double> fs = o.fs;
    if (!o.recording.empty()) {
        rec = io::parse_recording(o.recording, o.fs);
        if (!rec->abp) throw ProcessingError("reference channel required: " + o.recording + " has no abp column");
        fs = rec->fs();
    }
    // Sample indices are only needed for reference extraction; the model
    // itself works on lvet_ms and hr_bpm.
    auto beats = io::read_beats(o.beats, fs.value_or(1000.0));
    if (o.split == "test") {
        std::erase_if(beats, [&](const BeatFeature& b) { return b.beat_index <= model.train_last_beat_index; });
    }

    const auto predicted = estimate(model, beats);
    std::vector<io::PredictionRow> rows;
    rows.reserve(beats.size());
    for (std::size_t i = 0; i < beats.size(); ++i) rows.push_back({beats[i].beat_index, predicted[i], std::nullopt});

    if (rec) {
        const auto refs = reference_bp(*rec->abp, beats);
        std::size_t k = 0;
        std::vector<io::PredictionRow> kept;
        for (auto& row : rows) {
            while (k < refs.size() && refs[k].beat_index < row.beat_index) ++k;
            if (k < refs.size() && refs[k].beat_index == row.beat_index) {
                row.reference_mmHg = reference_value(refs[k], model.target);
                kept.push_back(row);
            }
        }
        rows = std::move(kept);
    }
    io::write_predictions(o.out, rows, rec.has_value());
    return kExitOk;
}

int cmd_evaluate(const PipelineConfig& cfg, const EvaluateOpts& o) {
    const auto preds = io::read_predictions(o.predictions);
    std::vector<double> est, ref;
    for (const auto& p : preds) est.push_back(p.predicted_mmHg);

    if (!o.references.empty()) {
        const auto refs = io::read_references(o.references);
        if (refs.size() != preds.size())
            throw ProcessingError("length mismatch: " + std::to_string(preds.size()) + " predictions vs " +
                                  std::to_string(refs.size()) + " references");
        for (std::size_t i = 0; i < refs.size(); ++i) {
            if (refs[i].beat_index != preds[i].beat_index)
                throw ProcessingError("beat_index mismatch at row " + std::to_string(i + 1) + ": prediction " +
                                      std::to_string(preds[i].beat_index) + " vs reference " +
                                      std::to_string(refs[i].beat_index));
            ref.push_back(refs[i].reference_mmHg);
        }
    } else {
        for (std::size_t i = 0; i < preds.size(); ++i) {
            if (!preds[i].reference_mmHg)
                throw ProcessingError(o.predictions + " has no reference_mmHg column; pass --references");
            ref.push_back(*preds[i].reference_mmHg);
        }
    }
    if (est.size() < 2) throw ProcessingError("need at least 2 prediction/reference pairs, got " +
                                              std::to_string(est.size()));

    const EvalReport report = evaluate(est, ref, cfg.bound);
    io::write_eval_report(o.out, report, fs::path(o.predictions).stem().string());
    if (!o.bland_altman.empty()) io::write_bland_altman(o.bland_altman, bland_altman(est, ref));
    if (!o.regression.empty()) io::write_regression(o.regression, ref, est);
    return kExitOk;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"SCG-based cuffless blood pressure pipeline", "scgbp"};
    app.set_help_all_flag("--help-all");
    Globals g;
    app.add_option("--config", g.config_path, "pipeline configuration (JSON)")->check(CLI::ExistingFile);
    app.add_option("--seed", g.seed, "seed for synthesis and random VMD initialisation");
    app.add_option("--jobs", g.jobs, "worker threads for multi-subject commands")->check(CLI::Range(1u, 256u));
    app.add_flag("--print-config", g.print_config, "print the effective configuration and exit");
    app.add_flag("--dump-stages", g.dump_stages, "write intermediate detector signals next to the beat files");
    app.require_subcommand(0, 1);

    SynthOpts so;
    auto* synth = app.add_subcommand("synth", "generate synthetic SCG + ABP recordings with ground truth");
    synth->add_option("--out", so.out, "output prefix (writes .csv, .meta.json, .truth.json)")->required();
    synth->add_option("--subject", so.subject, "subject id (default: prefix file name)");
    synth->add_option("--count", so.count, "number of recordings, seeds seed..seed+count-1")->check(CLI::Range(1, 10000));
    synth->add_option("--duration", so.duration_s, "overrides synth.duration_s");

    DetectOpts dop;
    auto* detect = app.add_subcommand("detect", "AO/pAC detection and beat features");
    detect->add_option("recordings", dop.recordings, "recording CSV files")->required()->check(CLI::ExistingFile);
    detect->add_option("--out", dop.out, "beats CSV (single recording)");
    detect->add_option("--out-dir", dop.out_dir, "directory for <name>.beats.csv files");
    detect->add_option("--fs", dop.fs, "sampling rate override (Hz)")->check(CLI::PositiveNumber);

    CalibrateOpts co;
    auto* cal = app.add_subcommand("calibrate", "fit the per-subject BP model on the first part of a recording");
    cal->add_option("--beats", co.beats, "beats CSV from detect")->required()->check(CLI::ExistingFile);
    cal->add_option("--recording", co.recording, "recording CSV with an abp column")->required()->check(CLI::ExistingFile);
    cal->add_option("--target", co.target, "sbp or dbp")->required()->check(CLI::IsMember({"sbp", "dbp"}, CLI::ignore_case));
    cal->add_option("--frac", co.frac, "calibration fraction (overrides bp_model.calibration_frac)");
    cal->add_option("--out", co.out, "model JSON")->required();
    cal->add_option("--test-references", co.test_references, "write held-out reference values (CSV)");
    cal->add_option("--fs", co.fs, "sampling rate override (Hz)")->check(CLI::PositiveNumber);

    EstimateOpts eo;
    auto* est = app.add_subcommand("estimate", "apply a calibrated model to beat features");
    est->add_option("--beats", eo.beats, "beats CSV from detect")->required()->check(CLI::ExistingFile);
    est->add_option("--model", eo.model, "model JSON from calibrate")->required()->check(CLI::ExistingFile);
    est->add_option("--out", eo.out, "predictions CSV")->required();
    est->add_option("--split", eo.split, "all beats, or only those after the calibration part")
        ->check(CLI::IsMember({"all", "test"}));
    est->add_option("--recording", eo.recording, "attach ABP references from this recording")->check(CLI::ExistingFile);
    est->add_option("--fs", eo.fs, "sampling rate override (Hz)")->check(CLI::PositiveNumber);

    EvaluateOpts vo;
    auto* eval = app.add_subcommand("evaluate", "error statistics against references");
    eval->add_option("--predictions", vo.predictions, "predictions CSV")->required()->check(CLI::ExistingFile);
    eval->add_option("--references", vo.references, "references CSV (default: reference_mmHg column)")
        ->check(CLI::ExistingFile);
    eval->add_option("--out", vo.out, "report JSON")->required();
    eval->add_option("--bland-altman", vo.bland_altman, "Bland-Altman point CSV");
    eval->add_option("--regression", vo.regression, "regression point CSV");

    std::vector<const char*> argv{"scgbp"};
    for (const auto& a : args) argv.push_back(a.c_str());

    try {
        try {
            app.parse(static_cast<int>(argv.size()), argv.data());
        } catch (const CLI::CallForHelp&) {
            out << app.help();
            return kExitOk;
        } catch (const CLI::CallForAllHelp&) {
            out << app.help("", CLI::AppFormatMode::All);
            return kExitOk;
        }

        PipelineConfig cfg = g.config_path.empty() ? PipelineConfig{} : load_config(g.config_path);
        if (g.seed) cfg.seed = *g.seed;
        if (so.duration_s) cfg.synth.duration_s = *so.duration_s;
        cfg.apply_seed();
        cfg.validate();

        if (g.print_config) {
            out << dump_config(cfg);
            return kExitOk;
        }
        if (synth->parsed()) return cmd_synth(cfg, so, g, err);
        if (detect->parsed()) return cmd_detect(cfg, dop, g, err);
        if (cal->parsed()) return cmd_calibrate(cfg, co);
        if (est->parsed()) return cmd_estimate(eo);
        if (eval->parsed()) return cmd_evaluate(cfg, vo);
        err << "error: a subcommand is required (synth, detect, calibrate, estimate, evaluate)\n";
        return kExitUsage;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitFailure;
    }
}

} // namespace scgbp::cli
