#include "spathermo/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <vector>

namespace spathermo {

namespace {

constexpr const char* kSchema = "spa-thermo/1";

// Minimal streaming JSON writer: insertion-ordered keys, compact output,
// every double at 17 significant digits. Non-finite numbers are refused so
// NaN/Inf can never leak into output.
class JsonWriter {
public:
    JsonWriter& begin_object() { return open('{'); }
    JsonWriter& end_object() { return close('}'); }
    JsonWriter& begin_array() { return open('['); }
    JsonWriter& end_array() { return close(']'); }

    JsonWriter& key(const std::string& k) {
        comma();
        out_ += '"';
        escape(k);
        out_ += "\":";
        pending_value_ = true;
        return *this;
    }

    JsonWriter& value(double v) {
        comma();
        out_ += format_g17(v);
        return *this;
    }
    JsonWriter& value(const std::optional<double>& v) {
        return v ? value(*v) : null();
    }
    JsonWriter& value(bool b) {
        comma();
        out_ += b ? "true" : "false";
        return *this;
    }
    JsonWriter& value(const std::string& s) {
        comma();
        out_ += '"';
        escape(s);
        out_ += '"';
        return *this;
    }
    JsonWriter& value_raw(const std::string& literal) {
        comma();
        out_ += literal;
        return *this;
    }
    JsonWriter& null() {
        comma();
        out_ += "null";
        return *this;
    }

    std::string str() && { return std::move(out_); }

private:
    JsonWriter& open(char c) {
        comma();
        out_ += c;
        first_.push_back(true);
        return *this;
    }
    JsonWriter& close(char c) {
        out_ += c;
        first_.pop_back();
        return *this;
    }
    void comma() {
        if (pending_value_) {
            pending_value_ = false;
            return;
        }
        if (!first_.empty()) {
            if (!first_.back()) out_ += ',';
            first_.back() = false;
        }
    }
    void escape(const std::string& s) {
        for (char c : s) {
            switch (c) {
                case '"': out_ += "\\\""; break;
                case '\\': out_ += "\\\\"; break;
                case '\n': out_ += "\\n"; break;
                case '\t': out_ += "\\t"; break;
                case '\r': out_ += "\\r"; break;
                default:
                    if (static_cast<unsigned char>(c) < 0x20) {
                        char buf[8];
                        std::snprintf(buf, sizeof buf, "\\u%04x", c);
                        out_ += buf;
                    } else {
                        out_ += c;
                    }
            }
        }
    }

    std::string out_;
    std::vector<bool> first_;
    bool pending_value_ = false;
};

void write_map(JsonWriter& w, const EntropySpec& spec) {
    w.key("family").value(spec.map->family());
    w.key("params").begin_object();
    for (const auto& [name, val] : spec.map->params()) w.key(name).value(val);
    w.end_object();
}

void write_conditions(JsonWriter& w, const ConditionReport& cr) {
    w.key("conditions").begin_object();
    w.key("beta").value(cr.beta);
    w.key("dbeta_dU").value(cr.dbeta_dU);
    w.key("hc_margin").value(cr.hc_margin);
    w.key("lsr_ok").value(cr.lsr_ok);
    if (cr.hc_ok)
        w.key("hc_ok").value(*cr.hc_ok);
    else
        w.key("hc_ok").null();
    if (cr.lsh_implied)
        w.key("lsh_implied").value(*cr.lsh_implied);
    else
        w.key("lsh_implied").null();
    w.end_object();
}

void write_spa_values(JsonWriter& w, const SpaPotentials& v) {
    w.key("H_hat").value(v.H_hat);
    w.key("beta_spa").value(v.beta);
    w.key("lnZ_spa").value(v.lnZ);
    w.key("F_spa").value(v.F);
    w.key("C_spa").value(v.C);
}

} // namespace

std::string format_g17(double v) {
    if (!std::isfinite(v)) throw Error("attempted to serialize a non-finite number");
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string to_json(const EquilibriumState& st, const std::optional<OracleComparison>& oracle) {
    const MaxEntSolution& sol = st.solution;
    JsonWriter w;
    w.begin_object();
    w.key("schema").value(std::string(kSchema));
    w.key("kind").value(std::string("state"));
    w.key("spectrum").begin_array();
    for (double e : sol.eps.levels()) w.value(e);
    w.end_array();
    w.key("constraint").value(to_string(sol.constraint));
    w.key("alpha").value(sol.alpha);
    write_map(w, st.spec);
    w.key("U").value(sol.U);
    w.key("P_hat").begin_array();
    for (double p : sol.P_hat.probs()) w.value(p);
    w.end_array();
    w.key("support_mask").begin_array();
    for (bool b : sol.support_mask) w.value(b);
    w.end_array();
    w.key("degenerate").value(sol.degenerate);
    w.key("R_hat").value(sol.R_hat);
    w.key("H_hat").value(st.H_hat);
    w.key("beta_renyi").value(sol.beta_renyi);
    w.key("beta_spa").value(st.beta_spa);
    w.key("lnZ_renyi").value(st.lnZ_renyi);
    w.key("lnZ_spa").value(st.lnZ_spa);
    w.key("F_renyi").value(st.F_renyi);
    w.key("F_spa").value(st.F_spa);
    w.key("C_renyi").value(st.C_renyi);
    w.key("C_spa").value(st.C_spa);

    w.key("flags").begin_object();
    w.key("degenerate").value(sol.degenerate);
    if (st.C_renyi && !st.C_spa)
        w.key("null_reason").value(std::string("hc-violation"));
    else if (!st.F_renyi)
        w.key("null_reason").value(std::string("near-degenerate-beta"));
    else
        w.key("null_reason").null();
    w.end_object();

    write_conditions(w, st.conditions);
    if (oracle) {
        w.key("oracle").begin_object();
        w.key("P_hat").begin_array();
        for (double p : oracle->P.probs()) w.value(p);
        w.end_array();
        w.key("tv").value(oracle->tv);
        w.end_object();
    }
    w.end_object();
    return std::move(w).str();
}

std::string to_json(const DiagramReport& rep) {
    JsonWriter w;
    w.begin_object();
    w.key("schema").value(std::string(kSchema));
    w.key("kind").value(std::string("diagram"));
    w.key("pass").value(rep.pass);
    w.key("p_hat").begin_object();
    w.key("tv").value(rep.p_hat_tv);
    w.key("tol").value(rep.p_hat_tol);
    w.key("pass").value(rep.p_hat_pass);
    w.end_object();
    w.key("paths").begin_array();
    for (const auto& p : rep.paths) {
        w.begin_object();
        w.key("name").value(p.name);
        if (p.error) {
            w.key("error").value(*p.error);
        } else {
            w.key("error").null();
            write_spa_values(w, p.values);
        }
        w.end_object();
    }
    w.end_array();
    w.key("checks").begin_array();
    for (const auto& c : rep.checks) {
        w.begin_object();
        w.key("quantity").value(c.quantity);
        w.key("values").begin_array();
        for (double v : c.values) w.value(v);
        w.end_array();
        w.key("worst_rel").value(c.worst_rel);
        w.key("tol").value(c.tol);
        w.key("pass").value(c.pass);
        w.key("skipped").value(c.skipped);
        w.end_object();
    }
    w.end_array();
    w.end_object();
    return std::move(w).str();
}

std::string to_json(const std::vector<verify::SuiteReport>& reports, std::uint64_t seed) {
    bool pass = verify::all_pass(reports);
    JsonWriter w;
    w.begin_object();
    w.key("schema").value(std::string(kSchema));
    w.key("kind").value(std::string("verify"));
    w.key("seed").value_raw(std::to_string(seed));
    w.key("pass").value(pass);
    w.key("suites").begin_array();
    for (const auto& rep : reports) {
        w.begin_object();
        w.key("suite").value(rep.suite);
        w.key("pass").value(rep.pass);
        w.key("checks").begin_array();
        for (const auto& c : rep.checks) {
            w.begin_object();
            w.key("name").value(c.name);
            w.key("pass").value(c.pass);
            w.key("worst").value(c.worst);
            w.key("tol").value(c.tol);
            w.key("count").value_raw(std::to_string(c.count));
            w.key("detail").value(c.detail);
            w.end_object();
        }
        w.end_array();
        w.end_object();
    }
    w.end_array();
    w.end_object();
    return std::move(w).str();
}

std::string error_json(const std::string& type, const std::string& message) {
    JsonWriter w;
    w.begin_object();
    w.key("schema").value(std::string(kSchema));
    w.key("kind").value(std::string("error"));
    w.key("error").begin_object();
    w.key("type").value(type);
    w.key("message").value(message);
    w.end_object();
    w.end_object();
    return std::move(w).str();
}

std::string sweep_csv_header() {
    return "U,R_hat,H_hat,beta_renyi,beta_spa,lnZ_renyi,lnZ_spa,F_renyi,F_spa,C_renyi,C_spa,flags";
}

namespace {

std::string opt_cell(const std::optional<double>& v) {
    return v ? format_g17(*v) : std::string();
}

} // namespace

std::string sweep_csv_row(const EquilibriumState& st) {
    const MaxEntSolution& sol = st.solution;
    std::string flags;
    auto add_flag = [&flags](const char* f) {
        if (!flags.empty()) flags += ';';
        flags += f;
    };
    if (sol.degenerate) add_flag("degenerate");
    if (!st.conditions.lsr_ok) add_flag("lsr_fail");
    if (st.conditions.hc_ok && !*st.conditions.hc_ok) add_flag("hc_fail");
    if (flags.empty()) flags = "ok";

    std::string row = format_g17(sol.U);
    for (const std::string& cell :
         {format_g17(sol.R_hat), format_g17(st.H_hat), format_g17(sol.beta_renyi),
          format_g17(st.beta_spa), format_g17(st.lnZ_renyi), format_g17(st.lnZ_spa),
          opt_cell(st.F_renyi), opt_cell(st.F_spa), opt_cell(st.C_renyi), opt_cell(st.C_spa),
          flags}) {
        row += ',';
        row += cell;
    }
    return row;
}

std::string sweep_csv_error_row(double U, const std::string& error_type) {
    std::string row = format_g17(U);
    for (int i = 0; i < 10; ++i) row += ',';
    row += ',';
    row += "error:" + error_type;
    return row;
}

} // namespace spathermo
