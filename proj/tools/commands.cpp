#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "linkpred/baseline_svd.hpp"
#include "linkpred/ingestion.hpp"
#include "linkpred/katz.hpp"
#include "linkpred/pipeline.hpp"
#include "linkpred/tvc_generator.hpp"

namespace linkpred::cli {

namespace fs = std::filesystem;

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h)
{
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string run_dir_name(const std::string& cmd, std::uint64_t hash)
{
    static const char* hex = "0123456789abcdef";
    std::string s = cmd + "-";
    for (int shift = 60; shift >= 0; shift -= 4)
        s += hex[(hash >> shift) & 0xf];
    return s;
}

CompareRow compare_row(const std::string& method, Seconds granule, const Eigen::MatrixXd& scores,
                       const AdjacencySlice& truth, const CandidateSet& cand)
{
    auto ls = label_candidates(scores, truth, cand);
    CompareRow row;
    row.method = method;
    row.granule = granule;
    row.auc = roc_from_labels(ls.scores, ls.labels).auc;
    row.top_l_ratio = top_l_from_labels(ls.scores, ls.labels).ratio;
    return row;
}

namespace {

std::string read_file(const std::string& path, const std::string& role)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open " + role + " file '" + path + "'");
    std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad())
        throw IoError("cannot read " + role + " file '" + path + "'");
    return data;
}

// Collects the canonical description of a run; the run directory name is
// its hash together with the bytes of every input file.
class RunKey {
public:
    explicit RunKey(std::string cmd) : cmd_(std::move(cmd)) { text_ = "linkpred/1 " + cmd_ + "\n"; }

    void set(const std::string& key, const std::string& value) { text_ += key + "=" + value + "\n"; }
    void set(const std::string& key, double value) { set(key, format_real(value)); }
    void set(const std::string& key, std::size_t value) { set(key, std::to_string(value)); }
    void input(const std::string& role, const std::string& bytes)
    {
        text_ += "input " + role + " " + std::to_string(bytes.size()) + "\n";
        hash_ = fnv1a(bytes, hash_);
    }
    void raw(const std::string& text) { text_ += text; }

    const std::string& text() const { return text_; }
    std::string dir_name() const { return run_dir_name(cmd_, fnv1a(text_, hash_)); }

private:
    std::string cmd_;
    std::string text_;
    std::uint64_t hash_ = 0xcbf29ce484222325ULL;
};

class RunDir {
public:
    RunDir(const std::string& out_root, const RunKey& key) : path_(fs::path(out_root) / key.dir_name())
    {
        std::error_code ec;
        fs::create_directories(path_, ec);
        if (ec)
            throw IoError("cannot create run directory '" + path_.string() + "': " + ec.message());
        write("config.txt", key.text());
    }

    void write(const std::string& name, const std::string& content) const
    {
        const auto p = path_ / name;
        std::ofstream f(p, std::ios::binary | std::ios::trunc);
        f << content;
        f.close();
        if (!f)
            throw IoError("cannot write '" + p.string() + "'");
    }

    const fs::path& path() const { return path_; }

private:
    fs::path path_;
};

template <class Fn>
std::string to_text(Fn&& fn)
{
    std::ostringstream os;
    fn(os);
    return os.str();
}

struct WindowFlags {
    double slice = 300;
    std::optional<std::size_t> slices;
    double observation = 14400;
    double origin = 0;

    void add(CLI::App& app)
    {
        app.add_option("--slice", slice, "Slice duration D in seconds")->capture_default_str();
        app.add_option("--slices", slices, "Number of observed slices T (default observation/D)");
        app.add_option("--observation", observation, "Observed span in seconds when --slices is absent")
            ->capture_default_str();
        app.add_option("--origin", origin, "Start of slice 1 in seconds")->capture_default_str();
    }

    WindowConfig resolve(double d) const
    {
        WindowConfig w;
        w.origin = origin;
        w.slice_duration = d;
        if (slices) {
            w.slice_count = *slices;
        } else {
            if (!(d > 0) || !(observation > 0))
                throw InvalidArgument("slice and observation must be positive");
            const double t = observation / d;
            if (t != std::floor(t) || t < 1)
                throw InvalidArgument("observation " + format_real(observation) + " is not a multiple of slice " +
                                      format_real(d) + "; pass --slices");
            w.slice_count = static_cast<std::size_t>(t);
        }
        w.validate();
        return w;
    }
    WindowConfig resolve() const { return resolve(slice); }
};

void key_window(RunKey& key, const WindowConfig& w)
{
    key.set("origin", w.origin);
    key.set("slice", w.slice_duration);
    key.set("slices", w.slice_count);
}

struct ScoringFlags {
    double theta = 0.2;
    double beta = 0.001;
    std::string mode = "centralized";
    unsigned khop = 2;
    std::size_t lmax = 10;

    void add(CLI::App& app, bool with_theta_beta = true)
    {
        if (with_theta_beta) {
            app.add_option("--theta", theta, "Recency decay in [0,1]")->capture_default_str();
            app.add_option("--beta", beta, "Katz damping factor")->capture_default_str();
        }
        app.add_option("--mode", mode, "centralized | distributed | distributed-k1 | distributed-k2 | truncated | truncated-L")
            ->capture_default_str();
        app.add_option("--khop", khop, "Neighborhood radius for --mode distributed (1 or 2)")->capture_default_str();
        app.add_option("--lmax", lmax, "Path length bound for --mode truncated")->capture_default_str();
    }

    ScoringSpec spec() const { return ScoringSpec::parse(mode, beta, khop, lmax); }
};

Seconds horizon_of(const std::vector<ContactEvent>& events)
{
    Seconds h = 0;
    for (const auto& e : events)
        h = std::max(h, e.end);
    return h;
}

// Evaluation needs the trace to reach into slice T+1.
void require_truth_window(const std::vector<ContactEvent>& events, const WindowConfig& w)
{
    const Seconds need = w.slice_end(w.slice_count);
    if (horizon_of(events) < need)
        throw InvalidArgument("trace ends at " + format_seconds(horizon_of(events)) + " s, before slice T+1 starts at " +
                              format_seconds(need) + " s");
}

struct Contacts {
    std::string bytes;
    ContactTrace trace;
};

Contacts load_contacts(const std::string& path)
{
    Contacts c;
    c.bytes = read_file(path, "contacts");
    std::istringstream in(c.bytes);
    c.trace = parse_contacts(in);
    return c;
}

// ---- commands ----

struct GenerateArgs {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> nodes;
    std::optional<double> duration;
    std::optional<double> tick;
    std::vector<std::string> sets;
    std::string out = "runs";
};

void cmd_generate(const GenerateArgs& a, std::ostream& out)
{
    TvcParams p;
    if (!a.config.empty()) {
        std::istringstream in(read_file(a.config, "generator config"));
        p = parse_tvc_config(in, p);
    }
    for (const auto& kv : a.sets) {
        auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw InvalidArgument("--set expects key=value, got '" + kv + "'");
        set_tvc_param(p, kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (a.seed) p.seed = *a.seed;
    if (a.nodes) p.node_count = *a.nodes;
    if (a.duration) p.duration = *a.duration;
    if (a.tick) p.tick = *a.tick;
    p.validate();

    const std::string conf = format_tvc_config(p);
    RunKey key("generate");
    key.raw(conf);
    const TvcTrace tr = generate(p);
    RunDir dir(a.out, key);
    dir.write("tvc.conf", conf);
    dir.write("contacts.csv", to_text([&](std::ostream& os) { write_contacts(os, tr.contacts, tr.nodes); }));
    dir.write("visits.csv",
              to_text([&](std::ostream& os) { write_visits(os, tr.visits, tr.nodes, tr.locations); }));
    out << dir.path().string() << '\n';
}

struct IngestArgs {
    std::string contacts;
    std::string visits;
    std::string out = "runs";
};

void cmd_ingest(const IngestArgs& a, std::ostream& out)
{
    Contacts c = load_contacts(a.contacts);
    RunKey key("ingest");
    key.input("contacts", c.bytes);
    std::optional<VisitTrace> vt;
    if (!a.visits.empty()) {
        const std::string bytes = read_file(a.visits, "visits");
        key.input("visits", bytes);
        std::istringstream in(bytes);
        vt = parse_visits(in, c.trace.nodes);
    }
    const NodeRegistry& nodes = vt ? vt->nodes : c.trace.nodes;

    nlohmann::ordered_json j;
    j["schema"] = "linkpred.ingest/1";
    j["node_count"] = nodes.size();
    j["contacts"] = c.trace.events.size();
    j["horizon"] = horizon_of(c.trace.events);
    if (vt) {
        j["locations"] = vt->locations.size();
        j["visits"] = vt->visits.size();
    }

    RunDir dir(a.out, key);
    dir.write("contacts.csv", to_text([&](std::ostream& os) { write_contacts(os, c.trace.events, nodes); }));
    if (vt)
        dir.write("visits.csv",
                  to_text([&](std::ostream& os) { write_visits(os, vt->visits, vt->nodes, vt->locations); }));
    dir.write("summary.json", j.dump(2) + "\n");
    out << dir.path().string() << '\n';
}

struct ScoreArgs {
    std::string contacts;
    WindowFlags window;
    ScoringFlags scoring;
    bool serial = false;
    std::string out = "runs";
};

void cmd_score(const ScoreArgs& a, std::ostream& out)
{
    Contacts c = load_contacts(a.contacts);
    PipelineConfig cfg;
    cfg.window = a.window.resolve();
    cfg.collapse.theta = a.scoring.theta;
    cfg.scoring = a.scoring.spec();

    RunKey key("score");
    key.input("contacts", c.bytes);
    key_window(key, cfg.window);
    key.set("theta", cfg.collapse.theta);
    key.set("beta", cfg.scoring.beta);
    key.set("mode", cfg.scoring.label());

    const std::size_t n = c.trace.nodes.size();
    SnapshotTensor tensor = build_tensor(c.trace.events, cfg.window, n);
    CollapsedTensor x = collapse(tensor, cfg.collapse);
    ScoreMatrix s = score(x, cfg.scoring, a.serial ? Exec::serial : Exec::parallel);

    RunDir dir(a.out, key);
    dir.write("scores.csv", to_text([&](std::ostream& os) { write_scores_csv(os, s.s, c.trace.nodes); }));
    dir.write("scores.json", scores_sidecar_json(eval_params(cfg, s), n));
    out << dir.path().string() << '\n';
}

struct EvalArgs {
    std::string contacts;
    std::string scores;
    WindowFlags window;
    ScoringFlags scoring;
    std::string regime = "all";
    bool serial = false;
    std::string out = "runs";
};

void cmd_eval(const EvalArgs& a, std::ostream& out)
{
    Contacts c = load_contacts(a.contacts);
    PipelineConfig cfg;
    cfg.window = a.window.resolve();
    cfg.collapse.theta = a.scoring.theta;
    cfg.scoring = a.scoring.spec();
    cfg.regime = parse_regime(a.regime);
    require_truth_window(c.trace.events, cfg.window);

    RunKey key("eval");
    key.input("contacts", c.bytes);
    key_window(key, cfg.window);
    key.set("regime", to_string(cfg.regime));

    const std::size_t n = c.trace.nodes.size();
    SnapshotTensor tensor = build_tensor(c.trace.events, cfg.window, n);
    AdjacencySlice truth = ground_truth_slice(c.trace.events, cfg.window, n);
    CandidateSet cand = CandidateSet::for_regime(cfg.regime, tensor);

    EvalReport report;
    if (!a.scores.empty()) {
        const std::string bytes = read_file(a.scores, "scores");
        key.input("scores", bytes);
        std::istringstream in(bytes);
        Eigen::MatrixXd s = read_scores_csv(in, c.trace.nodes);
        EvalParams p;
        p.method = "external";
        p.slice_count = cfg.window.slice_count;
        p.slice_duration = cfg.window.slice_duration;
        p.origin = cfg.window.origin;
        report = evaluate(s, truth, cand, p);
    } else {
        key.set("theta", cfg.collapse.theta);
        key.set("beta", cfg.scoring.beta);
        key.set("mode", cfg.scoring.label());
        CollapsedTensor x = collapse(tensor, cfg.collapse);
        ScoreMatrix s = score(x, cfg.scoring, a.serial ? Exec::serial : Exec::parallel);
        report = evaluate(s.s, truth, cand, eval_params(cfg, s));
    }

    RunDir dir(a.out, key);
    dir.write("report.json", report_json(report));
    dir.write("roc.csv", to_text([&](std::ostream& os) { write_roc_csv(os, report.roc); }));
    dir.write("cdf.csv", to_text([&](std::ostream& os) { write_cdf_csv(os, report.cdf); }));
    out << dir.path().string() << '\n';
}

struct CompareArgs {
    std::string contacts;
    std::string visits;
    std::vector<double> granules{300, 600, 1800, 3600};
    WindowFlags window;
    ScoringFlags scoring;
    std::string regime = "all";
    std::size_t rank = kDefaultProfileRank;
    bool serial = false;
    std::string out = "runs";
};

void cmd_compare(const CompareArgs& a, std::ostream& out)
{
    if (a.visits.empty())
        throw UsageError("compare needs --visits: the SVD baseline is built from location visits");
    if (a.window.slices)
        throw UsageError("compare derives T from --observation for each granule; drop --slices");
    if (a.granules.empty())
        throw InvalidArgument("--granules is empty");
    if (a.rank < 1)
        throw InvalidArgument("--rank must be >= 1");

    Contacts c = load_contacts(a.contacts);
    const std::string vbytes = read_file(a.visits, "visits (required by the SVD baseline)");
    std::istringstream vin(vbytes);
    VisitTrace vt = parse_visits(vin, c.trace.nodes);

    const Regime regime = parse_regime(a.regime);
    const ScoringSpec spec = a.scoring.spec();
    const Exec exec = a.serial ? Exec::serial : Exec::parallel;
    const std::string katz_label = "katz-" + spec.label();
    const std::string base_label = "baseline-svd";

    RunKey key("compare");
    key.input("contacts", c.bytes);
    key.input("visits", vbytes);
    key.set("observation", a.window.observation);
    key.set("origin", a.window.origin);
    key.set("theta", a.scoring.theta);
    key.set("beta", spec.beta);
    key.set("mode", spec.label());
    key.set("regime", to_string(regime));
    key.set("rank", a.rank);

    // Nodes seen only in visits are appended after the contact nodes.
    const NodeRegistry& nodes = vt.nodes;
    const std::size_t n = nodes.size();
    std::vector<CompareRow> rows;
    std::vector<std::pair<std::string, std::string>> files;
    for (double g : a.granules) {
        key.set("granule", g);
        PipelineConfig cfg;
        cfg.window = a.window.resolve(g);
        cfg.collapse.theta = a.scoring.theta;
        cfg.scoring = spec;
        cfg.regime = regime;
        require_truth_window(c.trace.events, cfg.window);

        SnapshotTensor tensor = build_tensor(c.trace.events, cfg.window, n);
        AdjacencySlice truth = ground_truth_slice(c.trace.events, cfg.window, n);
        CandidateSet cand = CandidateSet::for_regime(regime, tensor);

        ScoreMatrix katz = score(collapse(tensor, cfg.collapse), spec, exec);
        const Seconds span = static_cast<double>(cfg.window.slice_count) * g;
        auto assoc = build_association(vt.visits, n, vt.locations.size(), g, span, cfg.window.origin);
        std::vector<BehaviorProfile> profiles;
        profiles.reserve(assoc.size());
        for (const auto& m : assoc)
            profiles.push_back(profile(m, a.rank));
        ScoreMatrix base = baseline_scores(profiles, exec);

        rows.push_back(compare_row(katz_label, g, katz.s, truth, cand));
        rows.push_back(compare_row(base_label, g, base.s, truth, cand));
        const std::string tag = format_seconds(g);
        files.emplace_back("scores-katz-" + tag + ".csv",
                           to_text([&](std::ostream& os) { write_scores_csv(os, katz.s, nodes); }));
        files.emplace_back("scores-baseline-" + tag + ".csv",
                           to_text([&](std::ostream& os) { write_scores_csv(os, base.s, nodes); }));
    }

    RunDir dir(a.out, key);
    dir.write("compare.csv", to_text([&](std::ostream& os) { write_compare_csv(os, rows); }));
    dir.write("gap.csv",
              to_text([&](std::ostream& os) { write_compare_gap_csv(os, rows, katz_label, base_label); }));
    for (const auto& [name, text] : files)
        dir.write(name, text);
    out << dir.path().string() << '\n';
}

struct SweepArgs {
    std::string contacts;
    WindowFlags window;
    ScoringFlags scoring;
    std::vector<double> thetas{0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
    std::vector<double> betas{1e-4, 1e-3, 1e-2};
    std::string regime = "all";
    bool serial = false;
    std::string out = "runs";
};

void cmd_sweep(const SweepArgs& a, std::ostream& out)
{
    Contacts c = load_contacts(a.contacts);
    const WindowConfig w = a.window.resolve();
    const Regime regime = parse_regime(a.regime);
    const ScoringSpec spec = a.scoring.spec();
    if (a.thetas.empty() || a.betas.empty())
        throw InvalidArgument("theta and beta grids must be non-empty");
    require_truth_window(c.trace.events, w);

    RunKey key("sweep");
    key.input("contacts", c.bytes);
    key_window(key, w);
    key.set("mode", spec.label());
    key.set("regime", to_string(regime));
    for (double t : a.thetas)
        key.set("theta", t);
    for (double b : a.betas)
        key.set("beta", b);

    const std::size_t n = c.trace.nodes.size();
    SnapshotTensor tensor = build_tensor(c.trace.events, w, n);
    AdjacencySlice truth = ground_truth_slice(c.trace.events, w, n);
    auto rows = sweep(tensor, truth, a.thetas, a.betas, spec, regime, a.serial ? Exec::serial : Exec::parallel);

    RunDir dir(a.out, key);
    dir.write("sweep.csv", to_text([&](std::ostream& os) { write_sweep_csv(os, rows); }));
    out << dir.path().string() << '\n';
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Temporal link prediction with the Katz measure on contact traces"};
    app.name("linkpred");
    app.require_subcommand(1);

    GenerateArgs gen;
    auto* g = app.add_subcommand("generate", "Synthesize a community-mobility contact and visit trace");
    g->add_option("--config", gen.config, "key = value generator parameter file");
    g->add_option("--seed", gen.seed, "RNG seed");
    g->add_option("--nodes", gen.nodes, "Node count");
    g->add_option("--duration", gen.duration, "Trace length in seconds");
    g->add_option("--tick", gen.tick, "Simulation step in seconds");
    g->add_option("--set", gen.sets, "Any generator parameter as key=value (repeatable)");
    g->add_option("--out", gen.out, "Root directory for run outputs")->capture_default_str();

    IngestArgs ing;
    auto* i = app.add_subcommand("ingest", "Validate traces and rewrite them in canonical form");
    i->add_option("--contacts", ing.contacts, "Contact trace CSV")->required();
    i->add_option("--visits", ing.visits, "Visit trace CSV");
    i->add_option("--out", ing.out, "Root directory for run outputs")->capture_default_str();

    ScoreArgs sc;
    auto* s = app.add_subcommand("score", "Compute Katz scores over the observed slices");
    s->add_option("--contacts", sc.contacts, "Contact trace CSV")->required();
    sc.window.add(*s);
    sc.scoring.add(*s);
    s->add_flag("--serial", sc.serial, "Use the single-threaded reference kernels");
    s->add_option("--out", sc.out, "Root directory for run outputs")->capture_default_str();

    EvalArgs ev;
    auto* e = app.add_subcommand("eval", "Score (or load scores) and evaluate against slice T+1");
    e->add_option("--contacts", ev.contacts, "Contact trace CSV")->required();
    e->add_option("--scores", ev.scores, "Evaluate this scores CSV instead of computing Katz scores");
    ev.window.add(*e);
    ev.scoring.add(*e);
    e->add_option("--regime", ev.regime, "all | new")->capture_default_str();
    e->add_flag("--serial", ev.serial, "Use the single-threaded reference kernels");
    e->add_option("--out", ev.out, "Root directory for run outputs")->capture_default_str();

    CompareArgs cmp;
    auto* c = app.add_subcommand("compare", "Katz vs SVD behavior baseline across slice granules");
    c->add_option("--contacts", cmp.contacts, "Contact trace CSV")->required();
    c->add_option("--visits", cmp.visits, "Visit trace CSV (required by the SVD baseline)");
    c->add_option("--granules", cmp.granules, "Slice durations in seconds")->delimiter(',')->capture_default_str();
    cmp.window.add(*c);
    cmp.scoring.add(*c);
    c->add_option("--regime", cmp.regime, "all | new")->capture_default_str();
    c->add_option("--rank", cmp.rank, "Singular vectors kept per behavior profile")->capture_default_str();
    c->add_flag("--serial", cmp.serial, "Use the single-threaded reference kernels");
    c->add_option("--out", cmp.out, "Root directory for run outputs")->capture_default_str();
    cmp.scoring.mode = "distributed-k2";

    SweepArgs sw;
    auto* w = app.add_subcommand("sweep", "AUC and top-L ratio over a theta x beta grid");
    w->add_option("--contacts", sw.contacts, "Contact trace CSV")->required();
    sw.window.add(*w);
    sw.scoring.add(*w, false);
    w->add_option("--thetas", sw.thetas, "Theta grid")->delimiter(',');
    w->add_option("--betas", sw.betas, "Beta grid")->delimiter(',');
    w->add_option("--regime", sw.regime, "all | new")->capture_default_str();
    w->add_flag("--serial", sw.serial, "Use the single-threaded reference kernels");
    w->add_option("--out", sw.out, "Root directory for run outputs")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& ex) {
        const int rc = app.exit(ex, out, err);
        return rc == 0 ? kOk : kUsage;
    }

    try {
        if (*g)
            cmd_generate(gen, out);
        else if (*i)
            cmd_ingest(ing, out);
        else if (*s)
            cmd_score(sc, out);
        else if (*e)
            cmd_eval(ev, out);
        else if (*c)
            cmd_compare(cmp, out);
        else if (*w)
            cmd_sweep(sw, out);
        return kOk;
    } catch (const UsageError& ex) {
        err << "usage error: " << ex.what() << '\n';
        return kUsage;
    } catch (const IoError& ex) {
        err << "error: " << ex.what() << '\n';
        return kIo;
    } catch (const ParseError& ex) {
        err << "parse error: " << ex.what() << '\n';
        return kParse;
    } catch (const BetaTooLarge& ex) {
        err << "BetaTooLarge: " << ex.what() << '\n';
        return kBetaTooLarge;
    } catch (const NoPositives& ex) {
        err << "error: " << ex.what() << '\n';
        return kDegenerateTruth;
    } catch (const NoNegatives& ex) {
        err << "error: " << ex.what() << '\n';
        return kDegenerateTruth;
    } catch (const InvalidArgument& ex) {
        err << "invalid parameters: " << ex.what() << '\n';
        return kInvalidParams;
    } catch (const DenseLimitExceeded& ex) {
        err << "invalid parameters: " << ex.what() << '\n';
        return kInvalidParams;
    } catch (const std::exception& ex) {
        err << "error: " << ex.what() << '\n';
        return kFailure;
    }
}

}  // namespace linkpred::cli
