#include "nearsearch/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "nearsearch/bounds.hpp"
#include "nearsearch/constructions.hpp"
#include "nearsearch/latin_core.hpp"
#include "nearsearch/oracle.hpp"
#include "nearsearch/swap_engine.hpp"

namespace nearsearch {

namespace {

using nlohmann::json;

constexpr int kOk = 0;
constexpr int kNegative = 1;
constexpr int kError = 2;

// Error raised by a subcommand; always maps to exit code 2.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

PartialLatinArray load(const std::string& path, bool check) {
    const std::string text = read_file(path);
    try {
        return check ? parse_array(text) : parse_grid(text);
    } catch (const GridParseError& e) {
        throw UsageError(path + ":" + std::to_string(e.line()) + ":" + std::to_string(e.column()) + ": " + e.what());
    }
}

std::string join_ints(const std::vector<int>& v, const char* sep = " ") {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? sep : "") + std::to_string(v[i]);
    return s;
}

json stats_json(const SearchStats& s) {
    return {{"true_leaves", s.true_leaves},
            {"false_leaves", s.false_leaves},
            {"pruned_leaves", s.pruned_leaves},
            {"cycle_backs_at", s.cycle_backs_at},
            {"nodes", s.nodes},
            {"max_depth", s.max_depth}};
}

json violation_json(const LatinViolation& v) {
    return {{"kind", v.kind == LatinViolation::Kind::Row ? "row" : "column"},
            {"row", v.row},
            {"col", v.col},
            {"symbol", v.symbol}};
}

std::string violation_text(const LatinViolation& v) {
    const bool row = v.kind == LatinViolation::Kind::Row;
    return "symbol " + std::to_string(v.symbol) + " repeated in " + (row ? "row " : "column ") +
           std::to_string(row ? v.row : v.col) + " at (" + std::to_string(v.row) + "," + std::to_string(v.col) + ")";
}

json base_report(const std::string& command) { return {{"command", command}, {"version", kVersion}}; }

void emit(std::ostream& out, const json& j) { out << j.dump(2) << "\n"; }

OracleConfig oracle_config() {
    OracleConfig config;
    if (const char* cap = std::getenv("NEARSEARCH_ORACLE_CAP")) {
        try {
            config.max_order = std::stoi(cap);
        } catch (const std::exception&) {
            throw UsageError("NEARSEARCH_ORACLE_CAP must be an integer");
        }
    }
    return config;
}

struct VerifyArgs {
    std::string file;
    bool json = false;
};

int cmd_verify(const VerifyArgs& a, std::ostream& out) {
    const PartialLatinArray grid = load(a.file, false);
    const LatinReport report = check_latin(grid);
    std::vector<LatinViolation> all = report.row_violations;
    all.insert(all.end(), report.column_violations.begin(), report.column_violations.end());
    if (a.json) {
        json j = base_report("verify");
        j["inputs"] = {{"file", a.file}};
        j["verdict"] = report.ok() ? "valid" : "invalid";
        j["rows"] = grid.rows();
        j["cols"] = grid.cols();
        j["violations"] = json::array();
        for (const auto& v : all) j["violations"].push_back(violation_json(v));
        emit(out, j);
    } else {
        out << (report.ok() ? "valid" : "invalid") << " " << grid.rows() << "x" << grid.cols() << "\n";
        for (const auto& v : all) out << violation_text(v) << "\n";
    }
    return report.ok() ? kOk : kNegative;
}

struct NearArgs {
    int order = 0;
    std::string alg = "advanced";
    bool swap_only = false;
    bool square_prune = false;
    std::string failures;
    bool json = false;
    bool timing = false;
    int parallel = 1;
    std::uint64_t progress = 0;
};

void dump_failures(const std::string& dir, const std::vector<SearchFailure>& failures) {
    std::filesystem::create_directories(dir);
    for (std::size_t i = 0; i < failures.size(); ++i) {
        std::ostringstream name;
        name << std::setw(6) << std::setfill('0') << i << ".txt";
        std::ofstream f(std::filesystem::path(dir) / name.str(), std::ios::binary);
        if (!f) throw UsageError("cannot write to '" + dir + "'");
        f << "# sigma: " << join_ints(failures[i].sigma.columns()) << "\n" << serialize_array(failures[i].array);
    }
}

int cmd_near(const NearArgs& a, std::ostream& out, std::ostream& err) {
    if (a.order < 4 || a.order > kMaxSearchOrder)
        throw UsageError("--order must be between 4 and " + std::to_string(kMaxSearchOrder));
    if (a.parallel < 1) throw UsageError("--parallel must be at least 1");
    SearchOptions options;
    options.swap_only = a.swap_only;
    options.square_prune = a.square_prune;
    options.parallel = a.parallel;
    if (a.progress > 0) {
        options.progress_interval = a.progress;
        options.progress = [&err](const SearchStats& s) {
            err << "[progress] nodes=" << s.nodes << " true=" << s.true_leaves << " false=" << s.false_leaves
                << " escalations=" << s.cycle_backs_at[0] << std::endl;
        };
    }
    const OrderReport report = verify_order(a.order, algorithm_from_string(a.alg), options);
    if (!a.failures.empty()) dump_failures(a.failures, report.failures);

    if (a.json) {
        json j = base_report("near");
        j["inputs"] = {{"order", a.order},
                       {"algorithm", to_string(report.algorithm)},
                       {"swap_only", a.swap_only},
                       {"square_prune", a.square_prune},
                       {"parallel", a.parallel}};
        j["verdict"] = report.proved ? "proved" : "inconclusive";
        j["stats"] = stats_json(report.stats);
        j["failure_count"] = report.failures.size();
        j["chain_assumption"] = report.chain_assumption;
        if (a.timing) j["wall_time"] = report.wall_seconds;
        emit(out, j);
    } else {
        const auto& s = report.stats;
        out << "order " << a.order << " " << to_string(report.algorithm) << ": "
            << (report.proved ? "proved" : "inconclusive") << "\n"
            << "true_leaves " << s.true_leaves << "\n"
            << "false_leaves " << s.false_leaves << "\n"
            << "pruned_leaves " << s.pruned_leaves << "\n"
            << "cycle_backs_at " << s.cycle_backs_at[0] << " " << s.cycle_backs_at[1] << " " << s.cycle_backs_at[2]
            << " " << s.cycle_backs_at[3] << "\n"
            << "nodes " << s.nodes << "\n"
            << "max_depth " << s.max_depth << "\n"
            << "failures " << report.failures.size() << "\n"
            << "assumes " << report.chain_assumption << "\n";
        if (a.timing) out << "wall_time " << report.wall_seconds << "\n";
    }
    return report.proved ? kOk : kNegative;
}

struct OracleArgs {
    std::string file;
    std::string mode = "max-weight";
    bool json = false;
};

int cmd_oracle(const OracleArgs& a, std::ostream& out) {
    const PartialLatinArray grid = load(a.file, false);
    const OracleConfig config = oracle_config();
    OracleResult r;
    try {
        r = a.mode == "max-weight" ? max_diagonal_weight(grid, config) : max_partial_transversal_length(grid, config);
    } catch (const OracleCapError& e) {
        throw UsageError(e.what());
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    json witness;
    std::string witness_text;
    if (const auto* d = std::get_if<DiagonalPerm>(&r.witness)) {
        witness = d->columns();
        witness_text = "sigma " + join_ints(d->columns());
    } else {
        const auto& t = std::get<PartialTransversal>(r.witness);
        witness = json::array();
        witness_text = "entries";
        for (const Entry& e : t.entries) {
            witness.push_back({e.row, e.col, e.symbol});
            witness_text += " (" + std::to_string(e.row) + "," + std::to_string(e.col) + "," + std::to_string(e.symbol) + ")";
        }
    }
    if (a.json) {
        json j = base_report("oracle");
        j["inputs"] = {{"file", a.file}, {"mode", a.mode}};
        j["value"] = r.value;
        j["witness"] = witness;
        j["nodes_explored"] = r.nodes_explored;
        emit(out, j);
    } else {
        out << a.mode << " " << r.value << "\n" << witness_text << "\n";
    }
    return kOk;
}

struct DriskoArgs {
    int rows = 0;
    int cols = 0;
    bool certify = false;
    bool json = false;
};

int cmd_drisko(const DriskoArgs& a, std::ostream& out) {
    PartialLatinArray grid(1, 1, 1);
    try {
        grid = drisko(a.rows, a.cols);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    std::optional<DeltaCertificate> cert;
    if (a.certify) cert = certify_no_transversal(grid);
    if (a.json) {
        json j = base_report("drisko");
        j["inputs"] = {{"rows", a.rows}, {"cols", a.cols}, {"certify", a.certify}};
        j["array"] = serialize_array(grid);
        if (cert)
            j["certificate"] = {{"delta_table", cert->delta_table},  {"pattern_ok", cert->pattern_ok},
                                {"min_count", cert->min_count},      {"max_count", cert->max_count},
                                {"no_transversal", cert->no_transversal}, {"conclusion", cert->conclusion()}};
        emit(out, j);
    } else {
        out << serialize_array(grid);
        if (cert) {
            out << "# delta table\n";
            for (const auto& row : cert->delta_table) out << join_ints(row) << "\n";
            out << "# cells in the last " << a.cols - a.rows + 1 << " columns: between " << cert->min_count << " and "
                << cert->max_count << ", never 0 mod " << a.rows << "\n"
                << "certificate " << (cert->no_transversal ? "valid" : "invalid") << ": " << cert->conclusion() << "\n";
        }
    }
    return !cert || cert->no_transversal ? kOk : kNegative;
}

struct BoundsArgs {
    int max_k = 0;
    bounds::Value n2 = bounds::kDefaultN2;
    bool log = false;
    std::string sequence;
    bounds::Value order = 0;
    bool json = false;
};

json sequence_json(const bounds::BoundSequence& s) { return s.values; }

int cmd_bounds_solve(const BoundsArgs& a, std::ostream& out, std::ostream& err) {
    if (a.max_k < 2) throw UsageError("--max-k must be at least 2");
    if (a.n2 < 1) throw UsageError("--n2 must be positive");
    bounds::MinimizeOptions options;
    options.n2 = a.n2;
    options.on_level = [&err](const bounds::LevelResult& l) {
        err << "[progress] n_" << l.k << " = " << l.n_k << std::endl;
    };
    const auto result = bounds::minimize_nk(a.max_k, options);
    if (a.json) {
        json j = base_report("bounds solve");
        j["inputs"] = {{"max_k", a.max_k}, {"n2", a.n2}};
        j["levels"] = json::array();
        for (const auto& l : result.levels)
            j["levels"].push_back({{"k", l.k}, {"n_k", l.n_k}, {"witness", sequence_json(l.witness)}});
        if (a.log) j["log"] = result.log;
        emit(out, j);
    } else {
        out << "k\tn_k\tsequence\n";
        for (const auto& l : result.levels) {
            std::string seq;
            for (std::size_t i = 0; i < l.witness.values.size(); ++i)
                seq += (i ? "," : "") + std::to_string(l.witness.values[i]);
            out << l.k << "\t" << l.n_k << "\t[" << seq << "]\n";
        }
        if (a.log)
            for (const auto& line : result.log) out << "# " << line << "\n";
    }
    return kOk;
}

bounds::BoundSequence parse_sequence(const std::string& text) {
    bounds::BoundSequence s;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item.erase(0, item.find_first_not_of(" \t"));
        item.erase(item.find_last_not_of(" \t") + 1);
        std::size_t used = 0;
        long long v = 0;
        try {
            v = std::stoll(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (item.empty() || used != item.size()) throw UsageError("bad sequence entry '" + item + "'");
        s.values.push_back(v);
    }
    if (s.values.empty()) throw UsageError("empty sequence");
    return s;
}

int cmd_bounds_check(const BoundsArgs& a, std::ostream& out) {
    const auto seq = parse_sequence(a.sequence);
    const auto check = bounds::check_sequence(seq, a.n2);
    if (a.json) {
        json j = base_report("bounds check");
        j["inputs"] = {{"sequence", seq.values}, {"n2", a.n2}};
        j["verdict"] = check.ok ? "valid" : "invalid";
        j["reason"] = bounds::describe(check);
        if (!check.ok) j["violation"] = {{"j", check.j}, {"k", check.k}};
        emit(out, j);
    } else {
        out << (check.ok ? "valid" : "invalid");
        if (!check.ok) out << ": " << bounds::describe(check);
        out << "\n";
    }
    return check.ok ? kOk : kNegative;
}

int cmd_bounds_lookup(const BoundsArgs& a, std::ostream& out) {
    if (a.order < 1) throw UsageError("--order must be positive");
    const auto g = bounds::guarantee_length(a.order);
    if (a.json) {
        json j = base_report("bounds lookup");
        j["inputs"] = {{"order", a.order}};
        j["n"] = a.order;
        j["length"] = g.length;
        j["rule"] = bounds::to_string(g.rule);
        j["k_star"] = g.k_star;
        emit(out, j);
    } else {
        out << "order " << a.order << ": partial transversal of length >= " << g.length << " ("
            << bounds::to_string(g.rule);
        if (g.k_star) out << ", k* = " << g.k_star;
        out << ")\n";
    }
    return kOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Near transversal search in Latin arrays", "nearsearch"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    VerifyArgs verify;
    auto* verify_cmd = app.add_subcommand("verify", "Check that a grid file is a partial Latin array");
    verify_cmd->add_option("file", verify.file, "Grid file")->required();
    verify_cmd->add_flag("--json", verify.json, "JSON report");

    NearArgs near;
    auto* near_cmd = app.add_subcommand("near", "Run the #-swap search for near transversals at one order");
    near_cmd->add_option("--order", near.order, "Order n")->required();
    near_cmd->add_option("--alg", near.alg, "naive or advanced")
        ->check(CLI::IsMember({"naive", "advanced"}))
        ->capture_default_str();
    near_cmd->add_flag("--swap-only", near.swap_only, "Disable marker resolution and corner marking");
    near_cmd->add_flag("--square-prune", near.square_prune, "Prune branches that cannot complete to a Latin square");
    near_cmd->add_option("--failures", near.failures, "Directory for inconclusive arrays");
    near_cmd->add_flag("--json", near.json, "JSON report");
    near_cmd->add_flag("--timing", near.timing, "Include wall time in the report");
    near_cmd->add_option("--parallel", near.parallel, "Worker threads")->capture_default_str();
    near_cmd->add_option("--progress", near.progress, "Heartbeat to stderr every N nodes");

    OracleArgs oracle;
    auto* oracle_cmd = app.add_subcommand("oracle", "Exact maximum diagonal weight or partial transversal length");
    oracle_cmd->add_option("file", oracle.file, "Grid file")->required();
    oracle_cmd->add_option("--mode", oracle.mode, "max-weight or max-partial")
        ->check(CLI::IsMember({"max-weight", "max-partial"}))
        ->capture_default_str();
    oracle_cmd->add_flag("--json", oracle.json, "JSON report");

    DriskoArgs dr;
    auto* drisko_cmd = app.add_subcommand("drisko", "Build an m x n array without a transversal");
    drisko_cmd->add_option("--rows", dr.rows, "m")->required();
    drisko_cmd->add_option("--cols", dr.cols, "n")->required();
    drisko_cmd->add_flag("--certify", dr.certify, "Print the delta-sum certificate");
    drisko_cmd->add_flag("--json", dr.json, "JSON report");

    BoundsArgs bd;
    auto* bounds_cmd = app.add_subcommand("bounds", "Inequality bounds on n_k and guaranteed lengths");
    bounds_cmd->require_subcommand(1);
    auto* solve_cmd = bounds_cmd->add_subcommand("solve", "Minimal n_k for k = 2..max-k");
    solve_cmd->add_option("--max-k", bd.max_k, "Largest k")->required();
    solve_cmd->add_option("--n2", bd.n2, "Starting value n_2")->capture_default_str();
    solve_cmd->add_flag("--log", bd.log, "Include the minimality log");
    solve_cmd->add_flag("--json", bd.json, "JSON report");
    auto* check_cmd = bounds_cmd->add_subcommand("check", "Check a comma-separated sequence n_2,n_3,...");
    check_cmd->add_option("sequence", bd.sequence, "Sequence")->required();
    check_cmd->add_option("--n2", bd.n2, "Minimum n_2")->capture_default_str();
    check_cmd->add_flag("--json", bd.json, "JSON report");
    auto* lookup_cmd = bounds_cmd->add_subcommand("lookup", "Guaranteed partial transversal length at an order");
    lookup_cmd->add_option("--order", bd.order, "Order n")->required();
    lookup_cmd->add_flag("--json", bd.json, "JSON report");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? kOk : kError;
    }

    try {
        if (*verify_cmd) return cmd_verify(verify, out);
        if (*near_cmd) return cmd_near(near, out, err);
        if (*oracle_cmd) return cmd_oracle(oracle, out);
        if (*drisko_cmd) return cmd_drisko(dr, out);
        if (*solve_cmd) return cmd_bounds_solve(bd, out, err);
        if (*check_cmd) return cmd_bounds_check(bd, out);
        if (*lookup_cmd) return cmd_bounds_lookup(bd, out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kError;
    }
    return kError;
}

}  // namespace nearsearch
