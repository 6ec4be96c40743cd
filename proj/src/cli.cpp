#include "trekcalc/cli.hpp"

#include <CLI11.hpp>

#include <cctype>
#include <cstdio>
#include <map>

#include "trekcalc/certificates.hpp"
#include "trekcalc/covariance.hpp"
#include "trekcalc/errors.hpp"
#include "trekcalc/model.hpp"
#include "trekcalc/pc.hpp"
#include "trekcalc/treks.hpp"

namespace trekcalc {

namespace {

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::vector<int> parse_id_list(const std::string& text) {
    std::vector<int> out;
    if (text.empty()) return out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t comma = text.find(',', pos);
        std::string tok = text.substr(pos, comma == std::string::npos ? comma : comma - pos);
        if (tok.empty()) throw ParseError("empty id in list '" + text + "'");
        for (char c : tok)
            if (!std::isdigit(static_cast<unsigned char>(c)))
                throw ParseError("bad id '" + tok + "' in list");
        out.push_back(std::stoi(tok));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

std::pair<double, double> parse_box(const std::string& text) {
    auto comma = text.find(',');
    if (comma == std::string::npos) throw ParseError("box must be given as lo,hi");
    try {
        std::size_t used = 0;
        std::string lo_s = text.substr(0, comma), hi_s = text.substr(comma + 1);
        double lo = std::stod(lo_s, &used);
        if (used != lo_s.size()) throw ParseError("bad box '" + text + "'");
        double hi = std::stod(hi_s, &used);
        if (used != hi_s.size()) throw ParseError("bad box '" + text + "'");
        return {lo, hi};
    } catch (const ParseError&) {
        throw;
    } catch (const std::exception&) {
        throw ParseError("bad box '" + text + "'");
    }
}

OmegaMode parse_mode(const std::string& text) {
    return text == "symbolic" ? OmegaMode::symbolic : OmegaMode::identity;
}

std::string set_to_text(const std::vector<int>& s) {
    std::string out = "{";
    for (std::size_t k = 0; k < s.size(); ++k) {
        if (k) out += ",";
        out += std::to_string(s[k]);
    }
    return out + "}";
}

void print_lemma_report(std::ostream& out, const LemmaReport& rep) {
    out << "lemma " << rep.lemma << ": " << (rep.holds ? "holds" : "VIOLATED");
    if (!rep.detail.empty()) out << " (" << rep.detail << ")";
    out << "\n";
    if (rep.witness) {
        out << "  left  = " << poly_to_text(rep.witness->first) << "\n";
        out << "  right = " << poly_to_text(rep.witness->second) << "\n";
    }
}

struct Options {
    std::string model_path;
    std::string rows, cols, s_list;
    std::string omega_mode = "identity";
    std::string heuristic = "standard";
    std::string box = "-2,2";
    std::string measure = "uniform_box";
    int i0 = 0, j0 = 0;
    bool exact = false;
    double lambda = 0.0;
    long samples = 0;
    std::uint64_t seed = 0;
    int workers = 1;
};

int run_sigma(const Options& opt, std::ostream& out) {
    ModelFile model = load_model_file(opt.model_path);
    SymbolicSigma sigma(model.dag, parse_mode(opt.omega_mode));
    const auto& vs = model.dag.vertices();
    for (std::size_t i = 0; i < vs.size(); ++i)
        for (std::size_t j = i; j < vs.size(); ++j)
            out << "sigma[" << vs[i] << "," << vs[j]
                << "] = " << poly_to_text(sigma.entry(vs[i], vs[j])) << "\n";
    return 0;
}

int run_minor(const Options& opt, std::ostream& out, bool use_expansion) {
    ModelFile model = load_model_file(opt.model_path);
    auto rows = parse_id_list(opt.rows);
    auto cols = parse_id_list(opt.cols);
    OmegaMode mode = parse_mode(opt.omega_mode);
    Poly p;
    if (use_expansion) {
        p = expansion_det(model.dag, rows, cols, mode);
    } else {
        SymbolicSigma sigma(model.dag, mode);
        p = sigma.minor_det(rows, cols);
    }
    out << poly_to_text(p) << "\n";
    return 0;
}

int run_dsep(const Options& opt, std::ostream& out) {
    ModelFile model = load_model_file(opt.model_path);
    PcQuery q{opt.i0, opt.j0, parse_id_list(opt.s_list)};
    out << (d_separates(model.dag, q) ? "true" : "false") << "\n";
    return 0;
}

int run_corr(const Options& opt, std::ostream& out) {
    ModelFile model = load_model_file(opt.model_path);
    PcQuery q{opt.i0, opt.j0, parse_id_list(opt.s_list)};
    OmegaMode mode = model.point.omega.empty() ? OmegaMode::identity : OmegaMode::symbolic;
    SymbolicSigma sigma(model.dag, mode);
    if (opt.exact) {
        auto [corr2, sign] = partial_corr_exact(sigma, q, model.point);
        out << "corr2 = " << rat_to_string(corr2) << "\n";
        out << "sign(f) = " << (sign > 0 ? "+1" : sign < 0 ? "-1" : "0") << "\n";
        return 0;
    }
    auto cov = sigma_at_point(sigma, model.point);
    out << "corr = " << fmt_double(partial_corr_float(cov, model.dag.vertices(), q)) << "\n";
    return 0;
}

int run_certify(const Options& opt, std::ostream& out) {
    ModelFile model = load_model_file(opt.model_path);
    PcQuery q{opt.i0, opt.j0, parse_id_list(opt.s_list)};
    Certificate cert = certify_nonsingular(model.dag, q);
    out << cert.to_text();
    return cert.verified ? 0 : 1;
}

int run_lemmas(const Options& opt, std::ostream& out) {
    ModelFile model = load_model_file(opt.model_path);
    PcQuery q{opt.i0, opt.j0, parse_id_list(opt.s_list)};
    model.dag.validate_query(q);
    if (!theorem_condition(model.dag, q)) throw ConditionError("condition-unmet");
    bool all_hold = true;
    auto rep_sj = check_lemma_sj(model.dag, q);
    print_lemma_report(out, rep_sj);
    all_hold = all_hold && rep_sj.holds;
    Dag pruned = prune_outgoing_from_S(model.dag, q);
    bool any_s = false;
    for (int s : q.s) {
        if (!is_below(pruned, q.j0, s)) continue;
        any_s = true;
        auto rep = check_lemma_i0s(pruned, q, s);
        print_lemma_report(out, rep);
        all_hold = all_hold && rep.holds;
    }
    if (!any_s) out << "lemma i0s: holds (vacuous, no s in S below j0)\n";
    auto [rep_i0j0, g] = check_lemma_i0j0(pruned, q);
    print_lemma_report(out, rep_i0j0);
    all_hold = all_hold && rep_i0j0.holds;
    auto rep_id = check_lemma_id(pruned, q, g);
    print_lemma_report(out, rep_id);
    all_hold = all_hold && rep_id.holds;
    return all_hold ? 0 : 1;
}

int run_pc(const Options& opt, std::ostream& out) {
    ModelFile model = load_model_file(opt.model_path);
    OmegaMode mode = model.point.omega.empty() ? OmegaMode::identity : OmegaMode::symbolic;
    SymbolicSigma sigma(model.dag, mode);
    auto cov = sigma_at_point(sigma, model.point);
    PcHeuristic h = opt.heuristic == "intersection_first" ? PcHeuristic::intersection_first
                                                          : PcHeuristic::standard;
    PcState state = pc_edge_removal(cov, model.dag.vertices(), opt.lambda, h);
    for (const auto& rec : state.log)
        out << "removed " << rec.i << "-" << rec.j << " S=" << set_to_text(rec.s)
            << " corr=" << fmt_double(rec.corr) << " level=" << rec.level << "\n";
    out << "remaining:";
    if (state.edges.empty()) {
        out << " none";
    } else {
        for (const auto& [i, j] : state.edges) out << " " << i << "-" << j;
    }
    out << "\n";
    return 0;
}

int run_tube(const Options& opt, std::ostream& out) {
    ModelFile model = load_model_file(opt.model_path);
    TubeQuery tq;
    tq.query = PcQuery{opt.i0, opt.j0, parse_id_list(opt.s_list)};
    tq.lambda = opt.lambda;
    auto box = parse_box(opt.box);
    tq.box_lo = box.first;
    tq.box_hi = box.second;
    tq.measure =
        opt.measure == "gaussian" ? TubeMeasure::gaussian : TubeMeasure::uniform_box;
    tq.samples = opt.samples;
    tq.seed = opt.seed;
    tq.workers = opt.workers;
    SymbolicSigma sigma(model.dag, OmegaMode::identity);
    TubeResult res = tube_volume_mc(sigma, tq);
    out << "lambda,fraction,stderr,samples,seed\n";
    out << fmt_double(tq.lambda) << "," << fmt_double(res.fraction) << ","
        << fmt_double(res.stderr_) << "," << res.samples << "," << tq.seed << "\n";
    return 0;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"trek-system calculus for Gaussian DAG models", "trekcalc"};
    app.require_subcommand(1);
    Options opt;

    auto add_model = [&](CLI::App* cmd) {
        cmd->add_option("model", opt.model_path, "model file")->required();
    };
    auto add_query = [&](CLI::App* cmd) {
        cmd->add_option("--i0", opt.i0, "first endpoint")->required();
        cmd->add_option("--j0", opt.j0, "second endpoint")->required();
        cmd->add_option("--S", opt.s_list, "conditioning set, comma-separated");
    };
    auto add_omega_mode = [&](CLI::App* cmd) {
        cmd->add_option("--omega-mode", opt.omega_mode, "identity|symbolic")
            ->check(CLI::IsMember({"identity", "symbolic"}));
    };

    auto* c_sigma = app.add_subcommand("sigma", "print the symbolic covariance entries");
    add_model(c_sigma);
    add_omega_mode(c_sigma);

    auto* c_minor = app.add_subcommand("minor", "determinant of a covariance submatrix");
    add_model(c_minor);
    c_minor->add_option("--rows", opt.rows, "row set, comma-separated")->required();
    c_minor->add_option("--cols", opt.cols, "column set, comma-separated")->required();
    add_omega_mode(c_minor);

    auto* c_expand = app.add_subcommand("expand", "same minor via trek-system expansion");
    add_model(c_expand);
    c_expand->add_option("--rows", opt.rows, "row set, comma-separated")->required();
    c_expand->add_option("--cols", opt.cols, "column set, comma-separated")->required();
    add_omega_mode(c_expand);

    auto* c_dsep = app.add_subcommand("dsep", "d-separation test");
    add_model(c_dsep);
    add_query(c_dsep);

    auto* c_corr = app.add_subcommand("corr", "partial correlation at the model's point");
    add_model(c_corr);
    add_query(c_corr);
    c_corr->add_flag("--exact", opt.exact, "exact rational corr^2 plus sign");

    auto* c_certify = app.add_subcommand("certify", "nonsingularity certificate");
    add_model(c_certify);
    add_query(c_certify);

    auto* c_lemmas = app.add_subcommand("lemmas", "check the certificate lemmas");
    add_model(c_lemmas);
    add_query(c_lemmas);

    auto* c_pc = app.add_subcommand("pc", "PC edge-removal on the model covariance");
    add_model(c_pc);
    c_pc->add_option("--lambda", opt.lambda, "removal threshold")->required();
    c_pc->add_option("--heuristic", opt.heuristic, "standard|intersection_first")
        ->check(CLI::IsMember({"standard", "intersection_first"}));

    auto* c_tube = app.add_subcommand("tube", "Monte Carlo tube-volume estimate");
    add_model(c_tube);
    add_query(c_tube);
    c_tube->add_option("--lambda", opt.lambda, "correlation threshold")->required();
    c_tube->add_option("--samples", opt.samples, "sample count")->required();
    c_tube->add_option("--seed", opt.seed, "base RNG seed")->required();
    c_tube->add_option("--box", opt.box, "sampling box as lo,hi");
    c_tube->add_option("--measure", opt.measure, "uniform_box|gaussian")
        ->check(CLI::IsMember({"uniform_box", "gaussian"}));
    c_tube->add_option("--workers", opt.workers, "worker partitions");

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
        if (app.got_subcommand(c_sigma)) return run_sigma(opt, out);
        if (app.got_subcommand(c_minor)) return run_minor(opt, out, false);
        if (app.got_subcommand(c_expand)) return run_minor(opt, out, true);
        if (app.got_subcommand(c_dsep)) return run_dsep(opt, out);
        if (app.got_subcommand(c_corr)) return run_corr(opt, out);
        if (app.got_subcommand(c_certify)) return run_certify(opt, out);
        if (app.got_subcommand(c_lemmas)) return run_lemmas(opt, out);
        if (app.got_subcommand(c_pc)) return run_pc(opt, out);
        if (app.got_subcommand(c_tube)) return run_tube(opt, out);
        err << "error: no subcommand\n";
        return 2;
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const ParseError& e) {
        err << "error: " << e.what();
        if (e.line > 0) err << " (line " << e.line << ")";
        err << "\n";
        return 2;
    } catch (const ConditionError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace trekcalc
