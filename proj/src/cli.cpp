#include "ramify/cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "ramify/report.hpp"

namespace ramify {

Precision resolve_precision(long long flag_value) {
    long long n = 0;
    if (const char* env = std::getenv("RAMIFY_PRECISION")) {
        try {
            n = std::stoll(env);
        } catch (...) {
            throw ValidationError("RAMIFY_PRECISION is not an integer");
        }
    }
    if (flag_value > 0) n = flag_value;
    Precision prec;
    if (n > 0) {
        if (n < 2) throw ValidationError("precision must be at least 2");
        prec.Nt = n;
        prec.Np = n;
        prec.guard = std::min<long long>(8, std::max<long long>(2, n / 8));
    }
    return prec;
}

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open input file: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void emit_output(const std::string& text, const std::string& out, std::ostream& os) {
    if (out.empty()) {
        os << text << "\n";
        return;
    }
    std::ofstream f(out, std::ios::binary);
    if (!f) throw ValidationError("cannot open output file: " + out);
    f << text << "\n";
}

std::string table_view(const Json& r) {
    std::ostringstream os;
    os << "extension " << r.value("name", "?") << " over "
       << r.at("extension").value("base_field", "?") << "\n";
    const Json& e = r.at("extension");
    os << "  degree " << e.value("degree", 0) << ", group " << e.value("group", "?");
    if (e.contains("e"))
        os << ", e = " << e["e"] << ", f_sep = " << e["f_sep"] << ", f_ins = " << e["f_ins"];
    os << ", case " << r.value("case", "?") << "\n";
    auto rat_s = [](const Json& q) {
        std::string s = std::to_string(q.at("num").get<long long>());
        if (q.at("den").get<long long>() != 1) s += "/" + std::to_string(q.at("den").get<long long>());
        return s;
    };
    if (r.contains("ramification")) {
        os << "  i_G: ";
        for (auto& [k, v] : r["ramification"]["iG"].items())
            os << k << "=" << (v.is_string() ? v.get<std::string>() : std::to_string(v.get<long long>()))
               << " ";
        os << "\n  s_G: ";
        for (auto& [k, v] : r["ramification"]["sG"].items())
            os << k << "=" << (v.is_string() ? v.get<std::string>() : std::to_string(v.get<long long>()))
               << " ";
        os << "\n  modified jumps: ";
        for (auto& v : r["ramification"]["jumps"]) os << v << " ";
        os << " upper: ";
        for (auto& v : r["ramification"]["upper_jumps"]) os << rat_s(v) << " ";
        os << "\n";
    }
    if (r.contains("different"))
        os << "  v_L(different) = " << r["different"]["v_L"]
           << ", hilbert = " << r["different"]["hilbert"] << "\n";
    if (r.contains("conductors")) {
        os << "  sw = " << rat_s(r["conductors"]["sw"]) << ", artin = "
           << rat_s(r["conductors"]["artin"]) << ", ksw = " << r["conductors"]["ksw"] << "\n";
    }
    if (r.contains("depth")) {
        os << "  d_K = " << rat_s(r["depth"]["d_K"]) << ", hyodo lhs = "
           << rat_s(r["depth"]["hyodo_lhs"]) << ", rhs = " << rat_s(r["depth"]["hyodo_rhs"])
           << (r["depth"]["hyodo_first_equality"].get<bool>() ? " (equality)" : " (strict)") << "\n";
    }
    if (r.contains("tower"))
        os << "  tower: (" << r["tower"]["bottom_case"].get<std::string>() << ", "
           << r["tower"]["top_case"].get<std::string>() << "), |T:K| = " << r["tower"]["t_degree"]
           << "\n";
    if (r.contains("checks")) {
        os << "  checks:";
        for (auto& [k, v] : r["checks"].items()) os << " " << k << "=" << v;
        os << "\n";
    }
    return os.str();
}

} // namespace

int cmd_report(const std::string& path, const ReportOptions& opt, std::ostream& os,
               std::ostream& es) {
    try {
        Precision prec = resolve_precision(opt.precision);
        std::string raw = slurp(path);
        Json in;
        try {
            in = Json::parse(raw);
        } catch (const Json::parse_error& e) {
            es << "error: input is not valid JSON: " << e.what() << "\n";
            return 1;
        }
        ExtensionSpec spec = spec_from_json(in, prec);
        auto t0 = std::chrono::steady_clock::now();
        Json rep = full_report(spec, fnv1a_hex(raw));
        auto t1 = std::chrono::steady_clock::now();
        if (opt.table) {
            emit_output(table_view(rep), opt.out, os);
            es << "elapsed "
               << std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count() << " ms\n";
        } else {
            emit_output(rep.dump(2), opt.out, os);
        }
        return 0;
    } catch (const PrecisionExhausted& e) {
        es << "error: precision exhausted: " << e.what() << "\n";
        es << "hint: retry with a larger --precision (or RAMIFY_PRECISION)\n";
        return 2;
    } catch (const Json::exception& e) {
        es << "error: malformed input: " << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        es << "error: " << e.what() << "\n";
        return 1;
    }
}

namespace {

struct SuiteResult {
    long long ran = 0, failed = 0;
};

void run_suites_on(const std::string& label, const ExtensionSpec& spec, const std::string& suite,
                   SuiteResult& acc, std::ostream& os) {
    GaloisExtension E = build_extension(spec);
    RamificationData R = compute_iG(E);
    compute_sG(E, R);
    std::vector<CheckItem> items;
    auto want = [&](const std::string& s) { return suite == "all" || suite == s; };
    if (want("theorem1"))
        for (auto& it : check_theorem1(E, R)) items.push_back(it);
    if (want("lemmas234"))
        for (auto& it : check_lemmas234(E, R)) items.push_back(it);
    if (want("borger"))
        for (auto& it : check_borger(E, R)) items.push_back(it);
    if (want("conductors"))
        for (auto& it : check_conductors(E, R)) items.push_back(it);
    if (want("depth"))
        for (auto& it : check_depth(E, R)) items.push_back(it);
    if (want("hyodo"))
        for (auto& it : check_hyodo(E, R)) items.push_back(it);
    if (want("bounds"))
        for (auto& it : check_bounds(E, R)) items.push_back(it);
    for (auto& it : items) {
        ++acc.ran;
        if (!it.ok) ++acc.failed;
        os << (it.ok ? "[ ok ] " : "[FAIL] ") << label << " :: " << it.name;
        if (!it.detail.empty()) os << "  (" << it.detail << ")";
        os << "\n";
    }
}

} // namespace

int cmd_check(const std::string& file, bool catalog, const std::string& suite,
              long long precision, std::ostream& os, std::ostream& es) {
    static const std::vector<std::string> suites{"theorem1", "lemmas234", "borger", "conductors",
                                                 "depth",    "hyodo",     "bounds", "all"};
    try {
        if (std::find(suites.begin(), suites.end(), suite) == suites.end())
            throw UnknownSuite("unknown suite: " + suite);
        Precision prec = resolve_precision(precision);
        SuiteResult acc;
        if (catalog) {
            for (auto& entry : catalog_list())
                run_suites_on(entry.name, catalog_spec(entry.name, prec), suite, acc, os);
        } else {
            std::string raw = slurp(file);
            ExtensionSpec spec = spec_from_json(Json::parse(raw), prec);
            run_suites_on(spec.name, spec, suite, acc, os);
        }
        os << acc.ran << " checks, " << acc.failed << " failures\n";
        return acc.failed == 0 ? 0 : 1;
    } catch (const PrecisionExhausted& e) {
        es << "error: precision exhausted: " << e.what() << "\n";
        return 2;
    } catch (const Json::exception& e) {
        es << "error: malformed input: " << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        es << "error: " << e.what() << "\n";
        return 1;
    }
}

int cmd_catalog(bool list, const std::string& emit, const std::string& out, std::ostream& os,
                std::ostream& es) {
    try {
        if (list || emit.empty()) {
            for (auto& entry : catalog_list()) os << entry.name << "  " << entry.summary << "\n";
            return 0;
        }
        ExtensionSpec spec = catalog_spec(emit);
        emit_output(spec_to_json(spec).dump(2), out, os);
        return 0;
    } catch (const Error& e) {
        es << "error: " << e.what() << "\n";
        return 1;
    }
}

int run_cli(int argc, char** argv) {
    CLI::App app{"ramify: ramification invariants of monogenic p-extensions of complete "
                 "discretely valued fields"};
    app.require_subcommand(1);

    std::string report_file, report_out;
    long long report_prec = 0;
    bool report_table = false, report_json = false;
    auto* rep = app.add_subcommand("report", "full invariant report for an extension description");
    rep->add_option("file", report_file, "extension description (JSON)")->required();
    rep->add_option("--precision", report_prec, "series window / digit precision");
    rep->add_flag("--table", report_table, "human-readable summary");
    rep->add_flag("--json", report_json, "JSON output (default)");
    rep->add_option("--out", report_out, "write the report to a file");

    std::string check_file, check_suite = "all";
    long long check_prec = 0;
    bool check_catalog = false;
    auto* chk = app.add_subcommand("check", "run a theorem suite");
    chk->add_option("file", check_file, "extension description (JSON)");
    chk->add_flag("--catalog", check_catalog, "run over the shipped catalog");
    chk->add_option("--suite", check_suite,
                    "theorem1|lemmas234|borger|conductors|depth|hyodo|bounds|all");
    chk->add_option("--precision", check_prec, "series window / digit precision");

    bool cat_list = false;
    std::string cat_emit, cat_out;
    auto* cat = app.add_subcommand("catalog", "list or emit the shipped examples");
    cat->add_flag("--list", cat_list, "list entries");
    cat->add_option("--emit", cat_emit, "write the named description");
    cat->add_option("--out", cat_out, "write to a file instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    if (rep->parsed()) {
        ReportOptions opt;
        opt.precision = report_prec;
        opt.table = report_table && !report_json;
        opt.out = report_out;
        return cmd_report(report_file, opt, std::cout, std::cerr);
    }
    if (chk->parsed()) {
        if (!check_catalog && check_file.empty()) {
            std::cerr << "error: check needs a file or --catalog\n";
            return 1;
        }
        return cmd_check(check_file, check_catalog, check_suite, check_prec, std::cout, std::cerr);
    }
    if (cat->parsed()) return cmd_catalog(cat_list, cat_emit, cat_out, std::cout, std::cerr);
    return 1;
}

} // namespace ramify
