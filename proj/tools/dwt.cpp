// dwt -- double-well transfer-operator toolkit.
//
// Every subcommand reads a JSON config (--config), writes its result to
// --out or stdout, and exits 0 on success, 1 on validation failure, 2 on
// numeric failure, 3 on I/O failure.  Data outputs carry no timestamps so
// reruns are byte-identical.

#include <CLI11.hpp>

#include <cmath>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "dwt/asymptotics.hpp"
#include "dwt/io.hpp"
#include "dwt/nonselection.hpp"
#include "dwt/oracle.hpp"
#include "dwt/parallel.hpp"
#include "dwt/peierls.hpp"
#include "dwt/potential.hpp"
#include "dwt/series.hpp"
#include "dwt/spectrum.hpp"

namespace {

using dwt::io::fmt;
using dwt::io::json;

struct CommonOpts {
    std::string config;
    std::string out;
    std::string format = "json";
};

void emit(const CommonOpts& opts, const std::string& body) {
    if (opts.out.empty())
        std::cout << body;
    else
        dwt::io::write_text_file(opts.out, body);
}

dwt::ReducedPotential load_reduced(const json& cfg) {
    if (!cfg.contains("potential")) throw dwt::IoError("config: missing 'potential' path");
    return dwt::io::load_potential(cfg.at("potential").get<std::string>()).as_reduced();
}

std::vector<double> beta_list(const json& cfg) {
    std::vector<double> betas;
    if (cfg.contains("beta")) {
        const json& b = cfg.at("beta");
        if (b.is_number()) {
            betas.push_back(b.get<double>());
        } else if (b.is_array()) {
            for (const auto& x : b) betas.push_back(x.get<double>());
        } else {
            for (double v = b.at("min").get<double>(); v <= b.at("max").get<double>() + 1e-12;
                 v += b.at("step").get<double>())
                betas.push_back(v);
        }
    }
    if (betas.empty()) throw dwt::IoError("config: missing or empty 'beta'");
    return betas;
}

// least-squares slope of y against x
double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
    double n = static_cast<double>(x.size()), sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

int cmd_validate(const CommonOpts& opts) {
    json cfg = dwt::io::load_json_file(opts.config);
    if (!cfg.contains("potential")) throw dwt::IoError("config: missing 'potential' path");
    auto pf = dwt::io::load_potential(cfg.at("potential").get<std::string>());
    dwt::ValidationReport rep =
        pf.is_reduced ? dwt::validate_reduced(pf.reduced) : dwt::validate_general(pf.general);
    emit(opts, dwt::io::report_to_json(rep).dump(2) + "\n");
    return rep.ok ? 0 : 1;
}

int cmd_reduce(const CommonOpts& opts) {
    json cfg = dwt::io::load_json_file(opts.config);
    if (!cfg.contains("potential")) throw dwt::IoError("config: missing 'potential' path");
    auto pf = dwt::io::load_potential(cfg.at("potential").get<std::string>());
    dwt::ReducedPotential r = pf.as_reduced();
    emit(opts, dwt::io::reduced_to_json(r).dump(2) + "\n");
    return 0;
}

int cmd_solve(const CommonOpts& opts) {
    json cfg = dwt::io::load_json_file(opts.config);
    dwt::ReducedPotential r = load_reduced(cfg);
    int nmax = cfg.value("nmax", dwt::kDefaultNmax);
    double tol = cfg.value("tol", 1e-13);
    json out = json::array();
    for (double beta : beta_list(cfg)) {
        dwt::SpectralData sd = dwt::solve_lambda(r, beta, tol);
        dwt::CylinderTables ct = dwt::eigenfunction_table(r, sd, nmax);
        json e = dwt::io::spectral_to_json(sd);
        e["mu01"] = std::exp(ct.logmu01);
        e["mu"] = json::object();
        if (cfg.contains("words"))
            for (const auto& w : cfg.at("words")) {
                std::string word = w.get<std::string>();
                e["mu"][word] = dwt::gibbs_cylinder(r, sd, ct, word);
            }
        e["subaction"] = dwt::io::subaction_to_json(dwt::subaction_table(r, sd, ct));
        out.push_back(e);
    }
    emit(opts, out.dump(2) + "\n");
    return 0;
}

int cmd_sweep(const CommonOpts& opts) {
    json cfg = dwt::io::load_json_file(opts.config);
    dwt::ReducedPotential r = load_reduced(cfg);
    std::vector<double> betas = beta_list(cfg);
    struct Row {
        double beta, loglam1, lf0, lf1, lft0, lft1, lmu0, lmu1;
    };
    std::vector<Row> rows(betas.size());
    dwt::parallel_for(betas.size(), [&](size_t i) {
        dwt::SpectralData sd = dwt::solve_lambda(r, betas[i]);
        dwt::CylinderTables ct = dwt::eigenfunction_table(r, sd, 4);
        rows[i] = {betas[i],
                   sd.loglam1,
                   sd.logF[0],
                   sd.logF[1],
                   sd.logFt[0],
                   sd.logFt[1],
                   dwt::log_gibbs(r, sd, ct, "0"),
                   dwt::log_gibbs(r, sd, ct, "1")};
    });
    dwt::io::CsvWriter csv(
        {"beta", "loglam1", "logF0", "logF1", "logFt0", "logFt1", "logmu0", "logmu1"});
    std::vector<double> b, nll, nf0, nf1, nft0, nft1, nratio;
    for (const Row& w : rows) {
        csv.row({fmt(w.beta), fmt(w.loglam1), fmt(w.lf0), fmt(w.lf1), fmt(w.lft0), fmt(w.lft1),
                 fmt(w.lmu0), fmt(w.lmu1)});
        b.push_back(w.beta);
        nll.push_back(-w.loglam1);
        nf0.push_back(-w.lf0);
        nf1.push_back(-w.lf1);
        nft0.push_back(-w.lft0);
        nft1.push_back(-w.lft1);
        nratio.push_back(-(w.lmu0 - w.lmu1));
    }
    emit(opts, csv.str());
    // fitted log-slopes go to a sidecar next to the CSV (or stdout otherwise)
    json slopes;
    slopes["lam1"] = fit_slope(b, nll);
    slopes["F0"] = fit_slope(b, nf0);
    slopes["F1"] = fit_slope(b, nf1);
    slopes["Ft0"] = fit_slope(b, nft0);
    slopes["Ft1"] = fit_slope(b, nft1);
    slopes["mu_ratio"] = fit_slope(b, nratio);
    if (opts.out.empty())
        std::cout << slopes.dump(2) + "\n";
    else
        dwt::io::write_text_file(opts.out + ".slopes.json", slopes.dump(2) + "\n");
    return 0;
}

int cmd_classify(const CommonOpts& opts) {
    json cfg = dwt::io::load_json_file(opts.config);
    dwt::ReducedPotential r = load_reduced(cfg);
    dwt::AsymptoticProfile p = dwt::profile(r);
    emit(opts, dwt::io::profile_to_json(p).dump(2) + "\n");
    return 0;
}

int cmd_barrier(const CommonOpts& opts) {
    json cfg = dwt::io::load_json_file(opts.config);
    dwt::ReducedPotential r = load_reduced(cfg);
    int nmax = cfg.value("nmax", dwt::kDefaultNmax);
    dwt::BarrierTable bt = dwt::barrier(r, nmax);
    dwt::CrossingIdentities ci = dwt::crossing_identities(r);
    json out = dwt::io::barrier_to_json(bt);
    out["identities"] = {{"half_sum", ci.half_sum},
                        {"cross_0", ci.cross_0},
                        {"cross_1", ci.cross_1},
                        {"gamma", ci.min_value()},
                        {"nonselection", ci.nonselection}};
    emit(opts, out.dump(2) + "\n");
    return 0;
}

int cmd_subaction(const CommonOpts& opts) {
    json cfg = dwt::io::load_json_file(opts.config);
    dwt::ReducedPotential r = load_reduced(cfg);
    double beta = cfg.value("beta", 0.0);
    if (!(beta > 0)) throw dwt::IoError("config: positive 'beta' required");
    int nmax = cfg.value("nmax", dwt::kDefaultNmax);
    dwt::SpectralData sd = dwt::solve_lambda(r, beta);
    dwt::CylinderTables ct = dwt::eigenfunction_table(r, sd, nmax);
    dwt::SubactionTable vbeta = dwt::subaction_table(r, sd, ct);
    dwt::SubactionTable vinf = dwt::limit_subaction(r, nmax);
    dwt::CalibratedResult cal = dwt::solve_calibrated(r, vinf);
    json out;
    out["beta"] = beta;
    out["v_beta"] = dwt::io::subaction_to_json(vbeta);
    out["v_limit"] = dwt::io::subaction_to_json(vinf);
    out["v_calibrated"] = dwt::io::subaction_to_json(cal.v);
    out["supdist_beta_vs_limit"] = vbeta.sup_dist(vinf);
    out["supdist_calibrated_vs_limit"] = cal.v.sup_dist(vinf);
    out["lax_oleinik_iterations"] = cal.iterations;
    emit(opts, out.dump(2) + "\n");
    return 0;
}

int cmd_oracle_check(const CommonOpts& opts) {
    json cfg = dwt::io::load_json_file(opts.config);
    dwt::ReducedPotential r = load_reduced(cfg);
    int depth = cfg.value("depth", 8);
    int maxlen = cfg.value("words_maxlen", 6);
    auto trunc = dwt::oracle::truncate(r, depth);
    dwt::ReducedPotential rt = dwt::oracle::truncated_as_reduced(trunc);
    json out = json::array();
    for (double beta : beta_list(cfg)) {
        auto td = dwt::oracle::transfer_matrix_gibbs(trunc, beta);
        dwt::SpectralData sd = dwt::solve_lambda(rt, beta);
        dwt::CylinderTables ct = dwt::eigenfunction_table(rt, sd, dwt::kDefaultNmax);
        double rel_lam1 = std::abs(std::expm1(sd.loglam1 - td.loglam1));
        double max_mu_diff = 0.0;
        std::string worst;
        for (int len = 1; len <= maxlen; ++len) {
            for (unsigned w = 0; w < (1u << len); ++w) {
                std::string word;
                for (int i = len - 1; i >= 0; --i) word.push_back(((w >> i) & 1) ? '1' : '0');
                double d = std::abs(dwt::gibbs_cylinder(rt, sd, ct, word) -
                                    dwt::oracle::oracle_gibbs(td, word));
                if (d > max_mu_diff) {
                    max_mu_diff = d;
                    worst = word;
                }
            }
        }
        out.push_back({{"beta", beta},
                       {"loglam1_analytic", sd.loglam1},
                       {"loglam1_oracle", td.loglam1},
                       {"rel_lam1_diff", rel_lam1},
                       {"max_mu_abs_diff", max_mu_diff},
                       {"worst_word", worst},
                       {"oracle_residual", td.residual}});
    }
    emit(opts, out.dump(2) + "\n");
    return 0;
}

int cmd_nonselect(const CommonOpts& opts) {
    json cfg = dwt::io::load_json_file(opts.config);
    dwt::nonselection::StageParams sp;
    if (cfg.contains("schedule"))
        sp = dwt::io::load_schedule(cfg.at("schedule").get<std::string>());
    else
        sp = dwt::nonselection::desk_scale_default();
    dwt::nonselection::RuleThresholds th;
    if (cfg.contains("thresholds")) {
        const json& t = cfg.at("thresholds");
        th.decay_max = t.value("decay_max", th.decay_max);
        th.beta_eps_next_max = t.value("beta_eps_next_max", th.beta_eps_next_max);
        th.ratio_min = t.value("ratio_min", th.ratio_min);
    }
    auto rules = dwt::nonselection::check_rules(sp, th);
    auto results = dwt::nonselection::oscillation_experiment(sp);
    dwt::io::CsvWriter csv({"k", "beta", "mu0", "mu1", "loglam1", "alpha0", "theta0", "alpha1",
                            "theta1", "delta"});
    for (const auto& sr : results)
        csv.row({std::to_string(sr.k), fmt(sr.beta), fmt(sr.mu0), fmt(sr.mu1), fmt(sr.loglam1),
                 fmt(sr.diag.alpha0), fmt(sr.diag.theta0), fmt(sr.diag.alpha1),
                 fmt(sr.diag.theta1), fmt(sr.diag.delta)});
    emit(opts, csv.str());
    json jr;
    jr["pass"] = rules.pass;
    jr["rows"] = json::array();
    for (const auto& row : rules.rows)
        jr["rows"].push_back({{"k", row.k},
                              {"p2_decay", row.p2_decay},
                              {"q2_decay", row.q2_decay},
                              {"beta_eps_next", row.beta_eps_next},
                              {"ratio", row.ratio},
                              {"partial_sum", row.partial_sum},
                              {"pass", row.pass}});
    if (opts.out.empty())
        std::cout << jr.dump(2) + "\n";
    else
        dwt::io::write_text_file(opts.out + ".rules.json", jr.dump(2) + "\n");
    return 0;
}

int cmd_phase_grid(const CommonOpts& opts) {
    json cfg = dwt::io::load_json_file(opts.config);
    std::string family = cfg.value("family", "constants");
    auto range = [&](const char* key) {
        dwt::GridRange g;
        const json& j = cfg.at(key);
        g.min = j.at("min").get<double>();
        g.max = j.at("max").get<double>();
        g.steps = j.at("steps").get<int>();
        return g;
    };
    dwt::GridRange srange = range("s"), trange = range("t");
    double tail = cfg.value("tail", 3.0);
    std::function<std::optional<dwt::ReducedPotential>(double, double)> fam;
    if (family == "constants") {
        // H0 == s, H1 == t
        fam = [](double s, double t) -> std::optional<dwt::ReducedPotential> {
            if (!(s > 0.0) || !(t > 0.0)) return std::nullopt;
            dwt::ReducedPotential r;
            r.h[0] = dwt::PlateauSeq::constant(s);
            r.h[1] = dwt::PlateauSeq::constant(t);
            return r;
        };
    } else if (family == "first_level") {
        // H0 == s; H1 has a single depressed first level t below a fixed tail
        fam = [tail](double s, double t) -> std::optional<dwt::ReducedPotential> {
            if (!(s > 0.0) || !(t > 0.0)) return std::nullopt;
            dwt::ReducedPotential r;
            r.h[0] = dwt::PlateauSeq::constant(s);
            r.h[1] = dwt::PlateauSeq{{{1, t}}, tail};
            try {
                dwt::profile(r);
            } catch (const dwt::ValidationError&) {
                return std::nullopt;  // degenerate (infinite multiplicity) point
            }
            return r;
        };
    } else {
        throw dwt::IoError("phase-grid: unknown family '" + family + "'");
    }
    // classify rows in parallel: generate the grid coordinates first
    std::vector<std::pair<double, double>> pts;
    for (int i = 0; i < srange.steps; ++i)
        for (int j = 0; j < trange.steps; ++j) pts.emplace_back(srange.at(i), trange.at(j));
    std::vector<std::optional<dwt::PhaseGridRow>> rows(pts.size());
    dwt::parallel_for(pts.size(), [&](size_t i) {
        auto r = fam(pts[i].first, pts[i].second);
        if (!r) return;
        dwt::AsymptoticProfile p = dwt::profile(*r);
        dwt::PhaseGridRow row;
        row.s = pts[i].first;
        row.t = pts[i].second;
        row.regime = p.regime;
        row.gamma = p.gamma;
        row.kappa = p.kappa;
        row.c = p.c;
        row.w0 = p.w0;
        row.w1 = p.w1;
        rows[i] = row;
    });
    dwt::io::CsvWriter csv({"s", "t", "regime", "gamma", "kappa", "c", "w0", "w1"});
    for (const auto& row : rows) {
        if (!row) continue;
        csv.row({fmt(row->s), fmt(row->t), dwt::regime_name(row->regime), fmt(row->gamma),
                 std::to_string(row->kappa), fmt(row->c), row->w0 ? fmt(*row->w0) : "",
                 row->w1 ? fmt(*row->w1) : ""});
    }
    emit(opts, csv.str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"double-well transfer-operator toolkit"};
    app.require_subcommand(1);
    CommonOpts opts;

    std::vector<std::pair<const char*, int (*)(const CommonOpts&)>> cmds = {
        {"validate", cmd_validate},   {"reduce", cmd_reduce},
        {"solve", cmd_solve},         {"sweep", cmd_sweep},
        {"classify", cmd_classify},   {"barrier", cmd_barrier},
        {"subaction", cmd_subaction}, {"oracle-check", cmd_oracle_check},
        {"nonselect", cmd_nonselect}, {"phase-grid", cmd_phase_grid},
    };
    int (*selected)(const CommonOpts&) = nullptr;
    for (auto& [name, fn] : cmds) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--config", opts.config, "JSON config file")->required();
        sub->add_option("--out", opts.out, "output path (stdout if omitted)");
        sub->add_option("--format", opts.format, "csv|json (informational)");
        int (*fp)(const CommonOpts&) = fn;
        sub->callback([&selected, fp] { selected = fp; });
    }
    CLI11_PARSE(app, argc, argv);
    try {
        return selected(opts);
    } catch (const dwt::ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 1;
    } catch (const dwt::NumericError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return 2;
    } catch (const dwt::IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
