#ifndef DWT_IO_HPP
#define DWT_IO_HPP

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "dwt/asymptotics.hpp"
#include "dwt/errors.hpp"
#include "dwt/nonselection.hpp"
#include "dwt/peierls.hpp"
#include "dwt/potential.hpp"
#include "dwt/spectrum.hpp"

namespace dwt::io {

using nlohmann::json;

// All numeric text output goes through one formatter so files are
// byte-identical across runs and platforms with the same libc.
inline std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

inline json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw IoError("cannot parse " + path + ": " + e.what());
    }
    return j;
}

inline void write_text_file(const std::string& path, const std::string& body) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    out << body;
    if (!out) throw IoError("write failed for " + path);
}

// ---- plateau sequences and potentials ----------------------------------
//
// Sequence: {"plateaus": [[length, value], ...], "tail": x}
// Potential file, reduced: {"kind": "reduced", "H0": seq, "H1": seq,
//                           "limit_approximation": bool?, "eps_bracket": x?}
// Potential file, general: {"kind": "general", "a0": seq, "a1": seq,
//                           "b0": seq, "b1": seq}

inline PlateauSeq seq_from_json(const json& j) {
    if (!j.is_object() || !j.contains("plateaus") || !j.contains("tail"))
        throw IoError("sequence must have 'plateaus' and 'tail'");
    PlateauSeq s;
    for (const auto& p : j.at("plateaus")) {
        if (!p.is_array() || p.size() != 2) throw IoError("plateau must be [length, value]");
        s.plateaus.push_back({p.at(0).get<long long>(), p.at(1).get<double>()});
    }
    s.tail = j.at("tail").get<double>();
    return s;
}

inline json seq_to_json(const PlateauSeq& s) {
    json j;
    j["plateaus"] = json::array();
    for (const auto& p : s.plateaus) j["plateaus"].push_back({p.length, p.value});
    j["tail"] = s.tail;
    return j;
}

struct PotentialFile {
    bool is_reduced = false;
    GeneralDoubleWell general;
    ReducedPotential reduced;

    // The reduced form, reducing on the fly if the file held a general one.
    ReducedPotential as_reduced() const { return is_reduced ? reduced : reduce(general); }
};

inline PotentialFile load_potential(const std::string& path) {
    json j = load_json_file(path);
    if (!j.contains("kind")) throw IoError(path + ": missing 'kind'");
    PotentialFile pf;
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "reduced") {
        pf.is_reduced = true;
        pf.reduced.h[0] = seq_from_json(j.at("H0"));
        pf.reduced.h[1] = seq_from_json(j.at("H1"));
        pf.reduced.limit_approximation = j.value("limit_approximation", false);
        pf.reduced.eps_bracket = j.value("eps_bracket", 0.0);
        if (!pf.reduced.limit_approximation &&
            (pf.reduced.h[0].tail == 0.0 || pf.reduced.h[1].tail == 0.0))
            pf.reduced.limit_approximation = true;  // zero tail is only reachable as a limit
    } else if (kind == "general") {
        pf.general.a[0] = seq_from_json(j.at("a0"));
        pf.general.a[1] = seq_from_json(j.at("a1"));
        pf.general.b[0] = seq_from_json(j.at("b0"));
        pf.general.b[1] = seq_from_json(j.at("b1"));
    } else {
        throw IoError(path + ": unknown kind '" + kind + "'");
    }
    return pf;
}

inline json reduced_to_json(const ReducedPotential& r) {
    json j;
    j["kind"] = "reduced";
    j["H0"] = seq_to_json(r.h[0]);
    j["H1"] = seq_to_json(r.h[1]);
    if (r.limit_approximation) {
        j["limit_approximation"] = true;
        j["eps_bracket"] = r.eps_bracket;
    }
    return j;
}

// ---- schedules ----------------------------------------------------------
//
// {"stages": [{"p": , "q": , "eps": , "beta": }, ...], "eps_next": x}

inline nonselection::StageParams load_schedule(const std::string& path) {
    json j = load_json_file(path);
    nonselection::StageParams sp;
    if (!j.contains("stages")) throw IoError(path + ": missing 'stages'");
    for (const auto& s : j.at("stages")) {
        nonselection::Stage st;
        st.p = s.at("p").get<double>();
        st.q = s.at("q").get<double>();
        st.eps = s.at("eps").get<double>();
        st.beta = s.at("beta").get<double>();
        sp.stages.push_back(st);
    }
    sp.eps_next = j.value("eps_next", 0.0);
    return sp;
}

inline json schedule_to_json(const nonselection::StageParams& sp) {
    json j;
    j["stages"] = json::array();
    for (const auto& s : sp.stages)
        j["stages"].push_back({{"p", s.p}, {"q", s.q}, {"eps", s.eps}, {"beta", s.beta}});
    j["eps_next"] = sp.eps_next;
    return j;
}

// ---- report serializers -------------------------------------------------

inline json report_to_json(const ValidationReport& rep) {
    json j;
    j["ok"] = rep.ok;
    j["items"] = json::array();
    for (const auto& it : rep.items) {
        json e;
        e["name"] = it.name;
        e["pass"] = it.pass;
        if (!it.detail.empty()) e["detail"] = it.detail;
        j["items"].push_back(e);
    }
    return j;
}

inline json profile_to_json(const AsymptoticProfile& p) {
    json j;
    j["regime"] = regime_name(p.regime);
    j["gamma"] = p.gamma;
    j["swapped"] = p.swapped;
    if (p.regime == Regime::Barycenter) {
        j["kappa"] = p.kappa;
        j["c"] = p.c;
    }
    if (p.w0) j["w0"] = *p.w0;
    if (p.w1) j["w1"] = *p.w1;
    j["rates"] = {{"lam1", p.rates.lam1},
                  {"F0", p.rates.F[0]},
                  {"F1", p.rates.F[1]},
                  {"Ft0", p.rates.Ft[0]},
                  {"Ft1", p.rates.Ft[1]},
                  {"mu_ratio", p.rates.mu_ratio},
                  {"light_side", idx(p.rates.light_side)}};
    return j;
}

inline json spectral_to_json(const SpectralData& sd) {
    json j;
    j["beta"] = sd.beta;
    j["loglam1"] = sd.loglam1;
    j["lam"] = sd.lam();
    j["residual"] = sd.residual;
    j["logF0"] = sd.logF[0];
    j["logF1"] = sd.logF[1];
    j["logFt0"] = sd.logFt[0];
    j["logFt1"] = sd.logFt[1];
    return j;
}

inline json subaction_to_json(const SubactionTable& st) {
    json j;
    j["nmax"] = st.nmax;
    j["v0"] = st.v0;
    j["v1"] = st.v1;
    j["vfix0"] = st.vfix0;
    j["vfix1"] = st.vfix1;
    return j;
}

inline json barrier_to_json(const BarrierTable& bt) {
    json j;
    j["nmax"] = bt.nmax;
    j["from0_to1"] = bt.from0_to1;
    j["from1_to0"] = bt.from1_to0;
    j["h_0_to_1"] = bt.h_0_to_1;
    j["h_1_to_0"] = bt.h_1_to_0;
    j["liminf_to_0"] = bt.liminf_to_0;
    j["liminf_to_1"] = bt.liminf_to_1;
    return j;
}

// ---- CSV ----------------------------------------------------------------

struct CsvWriter {
    std::ostringstream out;

    explicit CsvWriter(const std::vector<std::string>& header) {
        for (size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
        out << "\n";
    }
    void row(const std::vector<std::string>& cells) {
        for (size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
        out << "\n";
    }
    std::string str() const { return out.str(); }
};

}  // namespace dwt::io

#endif
