#include "scgbp/io.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

namespace scgbp::io {

using nlohmann::json;

namespace {

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && (s[b] == ' ' || s[b] == '\t')) ++b;
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
    return std::string(s.substr(b, e - b));
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        out.push_back(trim(std::string_view(line).substr(start, comma == std::string::npos ? std::string::npos
                                                                                           : comma - start)));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

// Accepts "nan"/"inf" spellings so they can be reported as non-finite rather than unparsable.
std::optional<double> parse_number(const std::string& s) {
    double v = 0.0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    if (first != last && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last) return std::nullopt;
    return v;
}

std::size_t parse_index(const std::string& s, const fs::path& path, std::size_t row) {
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw FormatError(path.string() + ": bad integer '" + s + "' at row " + std::to_string(row));
    return v;
}

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

Table read_table(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open " + path.string());
    Table t;
    std::string line;
    bool have_header = false;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        auto cells = split_csv(line);
        if (!have_header) {
            t.header = std::move(cells);
            have_header = true;
            continue;
        }
        if (cells.size() != t.header.size())
            throw FormatError(path.string() + ": row " + std::to_string(t.rows.size() + 1) + " has " +
                              std::to_string(cells.size()) + " fields, header has " +
                              std::to_string(t.header.size()));
        t.rows.push_back(std::move(cells));
    }
    if (!have_header) throw FormatError(path.string() + ": empty file");
    return t;
}

std::optional<std::size_t> column(const Table& t, const std::string& name) {
    for (std::size_t i = 0; i < t.header.size(); ++i)
        if (t.header[i] == name) return i;
    return std::nullopt;
}

std::size_t require_column(const Table& t, const std::string& name, const fs::path& path) {
    auto c = column(t, name);
    if (!c) throw FormatError(path.string() + ": missing column " + name);
    return *c;
}

double cell_number(const Table& t, std::size_t row, std::size_t col, const fs::path& path) {
    auto v = parse_number(t.rows[row][col]);
    if (!v) throw FormatError(path.string() + ": bad number '" + t.rows[row][col] + "' at row " +
                              std::to_string(row + 1));
    return *v;
}

json read_json(const fs::path& path) {
    try {
        return json::parse(read_text(path));
    } catch (const json::exception& e) {
        throw FormatError(path.string() + ": " + e.what());
    }
}

void write_json(const fs::path& path, const json& j) { write_atomic(path, j.dump(2) + "\n"); }

template <class T>
T get_field(const json& j, const char* key, const fs::path& path) {
    if (!j.contains(key)) throw FormatError(path.string() + ": missing field " + key);
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw FormatError(path.string() + ": field " + key + " has the wrong type");
    }
}

double infer_fs(const std::vector<double>& t, const fs::path& path) {
    if (t.size() < 2) throw FormatError(path.string() + ": cannot infer sampling rate from fewer than two rows");
    const double dt = (t.back() - t.front()) / static_cast<double>(t.size() - 1);
    if (!(dt > 0.0)) throw FormatError(path.string() + ": time_s is not increasing; cannot infer sampling rate");
    // Rates are stored as round numbers; strip the accumulated float error.
    const double fs = 1.0 / dt;
    const double rounded = std::round(fs * 1e6) / 1e6;
    return rounded;
}

} // namespace

std::string format_double(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc{}) return std::to_string(v);
    return std::string(buf, ptr);
}

void write_atomic(const fs::path& path, const std::string& content) {
    const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
    std::random_device rd;
    const fs::path tmp = dir / ("." + path.filename().string() + ".tmp" + std::to_string(rd()));
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + path.string());
        out << content;
        out.flush();
        if (!out) {
            std::error_code ec;
            fs::remove(tmp, ec);
            throw std::runtime_error("cannot write " + path.string());
        }
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw std::runtime_error("cannot write " + path.string() + ": " + ec.message());
    }
}

std::string read_text(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path meta_path_for(const fs::path& csv) {
    fs::path p = csv;
    p.replace_extension(".meta.json");
    return p;
}

Recording parse_recording(const fs::path& csv, std::optional<double> fs_override) {
    const Table t = read_table(csv);
    const auto scg_col = column(t, "scg_z");
    if (!scg_col) throw FormatError(csv.string() + ": missing required channel scg_z");

    const char* names[] = {"time_s", "scg_z", "abp", "ecg", "ppg"};
    std::vector<std::vector<double>> data(5);
    std::vector<std::optional<std::size_t>> cols(5);
    for (int k = 0; k < 5; ++k) cols[k] = column(t, names[k]);

    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        for (int k = 0; k < 5; ++k) {
            if (!cols[k]) continue;
            const double v = cell_number(t, r, *cols[k], csv);
            if (!std::isfinite(v))
                throw FormatError(csv.string() + ": non-finite sample at row " + std::to_string(r + 1));
            data[k].push_back(v);
        }
    }

    std::string subject_id = csv.stem().string();
    std::optional<double> meta_fs;
    const fs::path meta = meta_path_for(csv);
    if (fs::exists(meta)) {
        const json j = read_json(meta);
        if (j.contains("subject_id")) subject_id = get_field<std::string>(j, "subject_id", meta);
        if (j.contains("fs_hz")) meta_fs = get_field<double>(j, "fs_hz", meta);
    }

    double fs = 0.0;
    if (fs_override) fs = *fs_override;
    else if (meta_fs) fs = *meta_fs;
    else if (cols[0]) fs = infer_fs(data[0], csv);
    else throw FormatError(csv.string() + ": sampling rate unknown (no time_s column, sidecar or override)");
    if (!(fs > 0.0) || !std::isfinite(fs)) throw FormatError(csv.string() + ": sampling rate must be positive");

    auto make = [&](int k) { return SampledSignal(std::move(data[k]), fs, names[k]); };
    Recording rec{subject_id, make(1), std::nullopt, std::nullopt, std::nullopt};
    if (cols[2]) rec.abp = make(2);
    if (cols[3]) rec.ecg = make(3);
    if (cols[4]) rec.ppg = make(4);
    rec.validate();
    return rec;
}

void write_recording(const Recording& rec, const fs::path& prefix) {
    rec.validate();
    std::string out = "time_s,scg_z";
    if (rec.abp) out += ",abp";
    if (rec.ecg) out += ",ecg";
    if (rec.ppg) out += ",ppg";
    out += '\n';
    const double fs = rec.fs();
    for (std::size_t i = 0; i < rec.size(); ++i) {
        out += format_double(static_cast<double>(i) / fs);
        out += ',';
        out += format_double(rec.scg_z[i]);
        for (const auto* ch : {&rec.abp, &rec.ecg, &rec.ppg}) {
            if (!*ch) continue;
            out += ',';
            out += format_double((**ch)[i]);
        }
        out += '\n';
    }
    fs::path csv = prefix;
    csv += ".csv";
    fs::path meta = prefix;
    meta += ".meta.json";
    write_atomic(csv, out);
    write_json(meta, json{{"subject_id", rec.subject_id}, {"fs_hz", fs}});
}

void write_truth(const SynthGroundTruth& t, const fs::path& path) {
    json j;
    j["ao_idx"] = t.ao_idx;
    j["pac_idx"] = t.pac_idx;
    j["ao_ms"] = t.ao_ms;
    j["ac_ms"] = t.ac_ms;
    j["pac_ms"] = t.pac_ms;
    j["lvet_ms"] = t.lvet_ms;
    j["hr_bpm"] = t.hr_bpm;
    j["sbp_mmHg"] = t.sbp_mmHg;
    j["dbp_mmHg"] = t.dbp_mmHg;
    write_json(path, j);
}

SynthGroundTruth read_truth(const fs::path& path) {
    const json j = read_json(path);
    SynthGroundTruth t;
    t.ao_idx = get_field<std::vector<std::size_t>>(j, "ao_idx", path);
    t.pac_idx = get_field<std::vector<std::size_t>>(j, "pac_idx", path);
    t.ao_ms = get_field<std::vector<double>>(j, "ao_ms", path);
    t.ac_ms = get_field<std::vector<double>>(j, "ac_ms", path);
    t.pac_ms = get_field<std::vector<double>>(j, "pac_ms", path);
    t.lvet_ms = get_field<std::vector<double>>(j, "lvet_ms", path);
    t.hr_bpm = get_field<std::vector<double>>(j, "hr_bpm", path);
    t.sbp_mmHg = get_field<std::vector<double>>(j, "sbp_mmHg", path);
    t.dbp_mmHg = get_field<std::vector<double>>(j, "dbp_mmHg", path);
    const std::size_t n = t.ao_idx.size();
    for (std::size_t m : {t.pac_idx.size(), t.ao_ms.size(), t.ac_ms.size(), t.pac_ms.size(), t.lvet_ms.size(),
                          t.hr_bpm.size(), t.sbp_mmHg.size(), t.dbp_mmHg.size()})
        if (m != n) throw FormatError(path.string() + ": truth arrays differ in length");
    return t;
}

void write_beats(const fs::path& path, const std::vector<BeatFeature>& beats, double fs) {
    std::string out = "beat_index,ao_ms,pac_ms,lvet_ms,hr_bpm\n";
    for (const auto& b : beats) {
        out += std::to_string(b.beat_index) + ',' + format_double(b.ao_idx * 1000.0 / fs) + ',' +
               format_double(b.pac_idx * 1000.0 / fs) + ',' + format_double(b.lvet_ms) + ',' +
               format_double(b.hr_bpm) + '\n';
    }
    write_atomic(path, out);
}

std::vector<BeatFeature> read_beats(const fs::path& path, double fs) {
    const Table t = read_table(path);
    const auto ci = require_column(t, "beat_index", path);
    const auto ca = require_column(t, "ao_ms", path);
    const auto cp = require_column(t, "pac_ms", path);
    const auto cl = require_column(t, "lvet_ms", path);
    const auto ch = require_column(t, "hr_bpm", path);
    std::vector<BeatFeature> out;
    out.reserve(t.rows.size());
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        BeatFeature b;
        b.beat_index = parse_index(t.rows[r][ci], path, r + 1);
        b.ao_idx = static_cast<std::size_t>(std::llround(cell_number(t, r, ca, path) * fs / 1000.0));
        b.pac_idx = static_cast<std::size_t>(std::llround(cell_number(t, r, cp, path) * fs / 1000.0));
        b.lvet_ms = cell_number(t, r, cl, path);
        b.hr_bpm = cell_number(t, r, ch, path);
        if (!(b.lvet_ms > 0.0) || !(b.hr_bpm > 0.0) || !std::isfinite(b.lvet_ms) || !std::isfinite(b.hr_bpm))
            throw FormatError(path.string() + ": row " + std::to_string(r + 1) + " needs positive lvet_ms and hr_bpm");
        if (!out.empty() && b.beat_index <= out.back().beat_index)
            throw FormatError(path.string() + ": beat_index must increase (row " + std::to_string(r + 1) + ")");
        out.push_back(b);
    }
    return out;
}

void write_detection_report(const fs::path& path, const std::string& subject_id, const PeakList& ao_raw,
                            const PeakList& ao, const CorrectionReport& correction,
                            const std::vector<PacResult>& pac, const BeatExtraction& beats, double fs) {
    auto to_ms = [fs](const std::vector<std::size_t>& v) {
        std::vector<double> out;
        out.reserve(v.size());
        for (auto i : v) out.push_back(i * 1000.0 / fs);
        return out;
    };
    json pacs = json::array();
    for (const auto& r : pac) {
        json e{{"interval", r.interval}, {"status", to_string(r.status)}};
        if (r.index) e["pac_ms"] = *r.index * 1000.0 / fs;
        pacs.push_back(std::move(e));
    }
    json j{
        {"subject_id", subject_id},
        {"fs_hz", fs},
        {"ao_detected", ao_raw.size()},
        {"ao_corrected", ao.size()},
        {"correction",
         {{"inserted_ms", to_ms(correction.inserted)},
          {"removed_systole_ms", to_ms(correction.removed_systole)},
          {"removed_diastole_ms", to_ms(correction.removed_diastole)},
          {"median_interval_ms", correction.median_interval * 1000.0 / fs},
          {"passes", correction.passes}}},
        {"pac", pacs},
        {"beats", beats.beats.size()},
        {"dropped_no_pac", beats.dropped_no_pac},
        {"dropped_guard", beats.dropped_guard},
    };
    write_json(path, j);
}

void write_model(const fs::path& path, const BpModel& m, const std::string& subject_id) {
    json j{
        {"subject_id", subject_id},
        {"target", to_string(m.target)},
        {"a", m.a},
        {"b", m.b},
        {"c", m.c},
        {"n_train", m.n_train},
        {"lvet_units", "ms"},
        {"condition_estimate", m.condition_estimate},
        {"train_last_beat_index", m.train_last_beat_index},
    };
    write_json(path, j);
}

BpModel read_model(const fs::path& path, std::string* subject_id) {
    const json j = read_json(path);
    BpModel m;
    try {
        m.target = parse_target(get_field<std::string>(j, "target", path));
    } catch (const std::invalid_argument& e) {
        throw FormatError(path.string() + ": " + e.what());
    }
    m.a = get_field<double>(j, "a", path);
    m.b = get_field<double>(j, "b", path);
    m.c = get_field<double>(j, "c", path);
    m.n_train = get_field<std::size_t>(j, "n_train", path);
    if (j.contains("lvet_units") && get_field<std::string>(j, "lvet_units", path) != "ms")
        throw FormatError(path.string() + ": lvet_units must be \"ms\"");
    if (j.contains("condition_estimate")) m.condition_estimate = get_field<double>(j, "condition_estimate", path);
    if (j.contains("train_last_beat_index"))
        m.train_last_beat_index = get_field<std::size_t>(j, "train_last_beat_index", path);
    if (!std::isfinite(m.a) || !std::isfinite(m.b) || !std::isfinite(m.c))
        throw FormatError(path.string() + ": non-finite coefficient");
    if (subject_id) *subject_id = j.value("subject_id", std::string{});
    return m;
}

void write_predictions(const fs::path& path, const std::vector<PredictionRow>& rows, bool with_reference) {
    std::string out = with_reference ? "beat_index,predicted_mmHg,reference_mmHg\n" : "beat_index,predicted_mmHg\n";
    for (const auto& r : rows) {
        out += std::to_string(r.beat_index) + ',' + format_double(r.predicted_mmHg);
        if (with_reference) {
            if (!r.reference_mmHg) throw std::invalid_argument("prediction row without reference");
            out += ',' + format_double(*r.reference_mmHg);
        }
        out += '\n';
    }
    write_atomic(path, out);
}

std::vector<PredictionRow> read_predictions(const fs::path& path) {
    const Table t = read_table(path);
    const auto ci = require_column(t, "beat_index", path);
    const auto cp = require_column(t, "predicted_mmHg", path);
    const auto cr = column(t, "reference_mmHg");
    std::vector<PredictionRow> out;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        PredictionRow row;
        row.beat_index = parse_index(t.rows[r][ci], path, r + 1);
        row.predicted_mmHg = cell_number(t, r, cp, path);
        if (cr) row.reference_mmHg = cell_number(t, r, *cr, path);
        out.push_back(row);
    }
    return out;
}

void write_references(const fs::path& path, const std::vector<ReferenceRow>& rows) {
    std::string out = "beat_index,reference_mmHg\n";
    for (const auto& r : rows) out += std::to_string(r.beat_index) + ',' + format_double(r.reference_mmHg) + '\n';
    write_atomic(path, out);
}

std::vector<ReferenceRow> read_references(const fs::path& path) {
    const Table t = read_table(path);
    const auto ci = require_column(t, "beat_index", path);
    const auto cr = require_column(t, "reference_mmHg", path);
    std::vector<ReferenceRow> out;
    for (std::size_t r = 0; r < t.rows.size(); ++r)
        out.push_back({parse_index(t.rows[r][ci], path, r + 1), cell_number(t, r, cr, path)});
    return out;
}

void write_eval_report(const fs::path& path, const EvalReport& r, const std::string& label) {
    json j{
        {"label", label},
        {"n", r.n},
        {"me_mmHg", r.me_mmHg},
        {"mae_mmHg", r.mae_mmHg},
        {"std_mmHg", r.std_mmHg},
        {"pearson_r", r.pearson_defined ? json(r.pearson_r) : json(nullptr)},
        {"ba_bias_mmHg", r.ba_bias_mmHg},
        {"ba_loa_low_mmHg", r.ba_loa_low_mmHg},
        {"ba_loa_high_mmHg", r.ba_loa_high_mmHg},
        {"ieee_pass", r.ieee_pass},
    };
    write_json(path, j);
}

void write_bland_altman(const fs::path& path, const BlandAltman& ba) {
    std::string out = "mean_mmHg,diff_mmHg\n";
    for (std::size_t i = 0; i < ba.means.size(); ++i)
        out += format_double(ba.means[i]) + ',' + format_double(ba.diffs[i]) + '\n';
    write_atomic(path, out);
}

void write_regression(const fs::path& path, std::span<const double> ref, std::span<const double> est) {
    if (ref.size() != est.size()) throw std::invalid_argument("regression pairs differ in length");
    std::string out = "reference_mmHg,estimated_mmHg\n";
    for (std::size_t i = 0; i < ref.size(); ++i) out += format_double(ref[i]) + ',' + format_double(est[i]) + '\n';
    write_atomic(path, out);
}

void write_stages(const fs::path& prefix, const AoStages& s, double fs) {
    auto series = [&](const char* stage, const std::vector<double>& v) {
        std::string out = std::string("time_s,") + stage + '\n';
        for (std::size_t i = 0; i < v.size(); ++i)
            out += format_double(static_cast<double>(i) / fs) + ',' + format_double(v[i]) + '\n';
        fs::path p = prefix;
        p += std::string(".") + stage + ".csv";
        write_atomic(p, out);
    };
    series("detrended", s.detrended);
    series("reconstructed", s.reconstructed);
    series("t_env", s.t_env);
    series("cce", s.cce);

    std::string marks = "kind,time_s\n";
    for (auto i : s.candidates) marks += "candidate," + format_double(static_cast<double>(i) / fs) + '\n';
    for (auto i : s.cce_peaks) marks += "cce_peak," + format_double(static_cast<double>(i) / fs) + '\n';
    fs::path p = prefix;
    p += ".marks.csv";
    write_atomic(p, marks);

    json modes = json::array();
    for (std::size_t k = 0; k < s.stage2_center_freqs_hz.size(); ++k)
        modes.push_back({{"center_hz", s.stage2_center_freqs_hz[k]}, {"rge", k < s.rge.size() ? s.rge[k] : 0.0}});
    fs::path pm = prefix;
    pm += ".modes.json";
    write_json(pm, modes);
}

} // namespace scgbp::io
