// canon-szego — batch front-end for the canonical-system / Krein-string
// spectral toolkit: Weyl functions on grids, spectral densities, entropy
// records, arclength grids and discrete characteristics, weight-class
// characteristics, string conversions, and the built-in verification suite.
//
// Exit codes: 0 success, 2 malformed input, 3 violated theorem hypothesis.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "canon/corpus.hpp"
#include "canon/entropy.hpp"
#include "canon/hamiltonian.hpp"
#include "canon/json_io.hpp"
#include "canon/muckenhoupt.hpp"
#include "canon/parallel.hpp"
#include "canon/string.hpp"
#include "canon/verify.hpp"
#include "canon/weyl.hpp"

namespace {

using canon::Complex;
using canon::Json;

std::string fmt15(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.15g", v);
    return buf;
}


struct GridSpec {
    double a = 0.0, b = 0.0;
    int n = 1;

    std::vector<double> points() const {
        std::vector<double> out;
        out.reserve(static_cast<std::size_t>(n));
        if (n == 1) {
            out.push_back(a);
            return out;
        }
        for (int k = 0; k < n; ++k)
            out.push_back(a + (b - a) * static_cast<double>(k) /
                                  static_cast<double>(n - 1));
        return out;
    }
};

GridSpec parse_grid(const std::string& text) {
    GridSpec g;
    char colon1 = 0, colon2 = 0;
    std::istringstream in(text);
    if (!(in >> g.a >> colon1 >> g.b >> colon2 >> g.n) || colon1 != ':' ||
        colon2 != ':' || g.n < 1 || !in.eof())
        throw std::invalid_argument("grid: expected the form a:b:n with n >= 1, got '" +
                                    text + "'");
    return g;
}

Json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open input file '" + path + "'");
    return Json::parse(in); // parse errors carry byte/line diagnostics
}

// Tabular results: fixed column names, one row per record.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::pair<std::string, std::string>> scalars; // name -> value

    std::string csv() const {
        std::ostringstream out;
        for (const auto& [k, v] : scalars) out << "# " << k << " = " << v << "\n";
        for (std::size_t c = 0; c < columns.size(); ++c)
            out << columns[c] << (c + 1 < columns.size() ? "," : "");
        if (!columns.empty()) out << "\n";
        for (const auto& row : rows) {
            for (std::size_t c = 0; c < row.size(); ++c)
                out << row[c] << (c + 1 < row.size() ? "," : "");
            out << "\n";
        }
        return out.str();
    }

    Json json(const std::string& command) const {
        Json j;
        j["command"] = command;
        for (const auto& [k, v] : scalars) {
            char* end = nullptr;
            const double num = std::strtod(v.c_str(), &end);
            if (end && *end == '\0' && v != "inf" && v != "-inf" && v != "nan")
                j[k] = num;
            else
                j[k] = v;
        }
        if (!columns.empty()) {
            Json rows_json = Json::array();
            for (const auto& row : rows) {
                Json r;
                for (std::size_t c = 0; c < columns.size(); ++c) {
                    char* end = nullptr;
                    const double num = std::strtod(row[c].c_str(), &end);
                    if (end && *end == '\0' && row[c] != "inf" && row[c] != "-inf" &&
                        row[c] != "nan")
                        r[columns[c]] = num;
                    else
                        r[columns[c]] = row[c];
                }
                rows_json.push_back(std::move(r));
            }
            j["rows"] = std::move(rows_json);
        }
        return j;
    }
};

void emit(const Table& table, const std::string& command, const std::string& format,
          const std::string& output) {
    std::string text;
    if (format == "json")
        text = table.json(command).dump(2) + "\n";
    else
        text = table.csv();
    if (output.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(output);
        if (!out) throw std::invalid_argument("cannot open output file '" + output + "'");
        out << text;
    }
}

int run(int argc, char** argv) {
    CLI::App app{"spectral toolkit for canonical Hamiltonian systems and Krein strings"};
    app.require_subcommand(1);

    std::string input, output, format = "csv", grid_text;
    double imag_part = 1.0, tol = 1e-10, shift_r = 0.0, eps = 0.0;
    std::size_t nmax = 16;
    bool dualize = false;

    auto add_io = [&](CLI::App* cmd, bool needs_input = true) {
        if (needs_input)
            cmd->add_option("--input", input, "input JSON file")->required();
        cmd->add_option("--format", format, "output format: csv or json")
            ->check(CLI::IsMember({"csv", "json"}));
        cmd->add_option("--output", output, "output path (stdout if omitted)");
    };

    auto* sim = app.add_subcommand("simulate", "Weyl function m on a z grid");
    add_io(sim);
    sim->add_option("--grid", grid_text, "real parts a:b:n")->required();
    sim->add_option("--imag", imag_part, "imaginary part of z (default 1)");
    sim->add_option("--tol", tol, "certified accuracy target");

    auto* den = app.add_subcommand("density", "spectral density w on an x grid");
    add_io(den);
    den->add_option("--grid", grid_text, "grid a:b:n")->required();
    den->add_option("--eps", eps, "Poisson regularization height (0 = exact route)");

    auto* ent = app.add_subcommand("entropy", "entropy record I, J, K on both routes");
    add_io(ent);
    ent->add_option("--r", shift_r, "shift parameter r (default 0)");
    ent->add_option("--tol", tol, "quadrature tolerance");

    auto* sze = app.add_subcommand("szego", "arclength grid and discrete characteristic");
    add_io(sze);
    sze->add_option("--nmax", nmax, "number of grid points to print");

    auto* a2c = app.add_subcommand("a2", "weight-class characteristics of diag(h, 1/h)");
    add_io(a2c);

    auto* str = app.add_subcommand("string", "Krein-string operations");
    auto* conv = str->add_subcommand("convert", "string <-> Hamiltonian");
    add_io(conv);
    conv->add_flag("--dual", dualize, "convert the dual string instead");
    auto* ana = str->add_subcommand("analyze", "grid, characteristic, log integral");
    add_io(ana);
    ana->add_option("--nmax", nmax, "number of grid points to print");
    auto* strq = str->add_subcommand("q", "principal Weyl function q on a z grid");
    add_io(strq);
    strq->add_option("--grid", grid_text, "real parts a:b:n")->required();
    strq->add_option("--imag", imag_part, "imaginary part of z (default 1)");
    str->require_subcommand(1);

    auto* ver = app.add_subcommand("verify", "run the built-in verification suite");
    add_io(ver, false);

    CLI11_PARSE(app, argc, argv);

    if (sim->parsed()) {
        const canon::Hamiltonian h = canon::hamiltonian_from_json(load_json(input));
        const GridSpec grid = parse_grid(grid_text);
        const std::vector<double> xs = grid.points();
        std::vector<canon::WeylResult> results(xs.size());
        canon::parallel_map(xs.size(), [&](std::size_t k) {
            results[k] = canon::m_function(h, Complex(xs[k], imag_part), tol);
        });
        Table t;
        t.columns = {"re_z", "im_z", "re_m", "im_m", "radius", "route"};
        for (std::size_t k = 0; k < xs.size(); ++k)
            t.rows.push_back({fmt15(xs[k]), fmt15(imag_part),
                              fmt15(std::real(results[k].value)),
                              fmt15(std::imag(results[k].value)),
                              fmt15(results[k].radius),
                              results[k].route == canon::WeylRoute::exact_tail
                                  ? "exact-tail"
                                  : "disk-limit"});
        emit(t, "simulate", format, output);
        return 0;
    }

    if (den->parsed()) {
        const canon::Hamiltonian h = canon::hamiltonian_from_json(load_json(input));
        const GridSpec grid = parse_grid(grid_text);
        const std::vector<double> xs = grid.points();
        std::vector<double> w(xs.size());
        canon::parallel_map(xs.size(), [&](std::size_t k) {
            w[k] = canon::spectral_density(h, xs[k], eps);
        });
        Table t;
        t.columns = {"x", "w"};
        for (std::size_t k = 0; k < xs.size(); ++k)
            t.rows.push_back({fmt15(xs[k]), fmt15(w[k])});
        emit(t, "density", format, output);
        return 0;
    }

    if (ent->parsed()) {
        const canon::Hamiltonian h = canon::hamiltonian_from_json(load_json(input));
        const canon::EntropyRecord exact = canon::entropy_K(h, shift_r);
        Table t;
        t.scalars.emplace_back("r", fmt15(shift_r));
        t.scalars.emplace_back("I", fmt15(exact.I));
        t.scalars.emplace_back("J_exact", fmt15(exact.J));
        t.scalars.emplace_back("K_exact", fmt15(exact.K));
        if (canon::shift(h, shift_r).tail().det() > 0.0) {
            const canon::EntropyRecord quad = canon::entropy_K_quadrature(h, shift_r, tol);
            t.scalars.emplace_back("I_quadrature", fmt15(quad.I));
            t.scalars.emplace_back("J_quadrature", fmt15(quad.J));
            t.scalars.emplace_back("K_quadrature", fmt15(quad.K));
        }
        emit(t, "entropy", format, output);
        return 0;
    }

    if (sze->parsed()) {
        const canon::Hamiltonian h = canon::hamiltonian_from_json(load_json(input));
        const auto eta = canon::eta_grid(h, nmax);
        const auto characteristic = canon::szego_characteristic(h);
        Table t;
        t.scalars.emplace_back("characteristic", fmt15(characteristic.total));
        t.scalars.emplace_back("terms", fmt15(double(characteristic.terms.size())));
        t.columns = {"n", "eta"};
        for (std::size_t n = 0; n < eta.size(); ++n)
            t.rows.push_back({std::to_string(n), fmt15(eta[n])});
        emit(t, "szego", format, output);
        return 0;
    }

    if (a2c->parsed()) {
        const canon::Hamiltonian h = canon::hamiltonian_from_json(load_json(input));
        const canon::WeightFunction w = canon::weight_from_hamiltonian(h);
        const auto seq = canon::sequences_and_identity(w);
        const double k_entropy = canon::entropy_K(h).K;
        const auto witness = canon::p1_witness(w, k_entropy);
        Table t;
        t.scalars.emplace_back("a2_ell1", fmt15(canon::a2_ell1(w)));
        t.scalars.emplace_back("int_characteristic", fmt15(canon::int_characteristic(w)));
        t.scalars.emplace_back("l1_identity_residual", fmt15(seq.identity_residual));
        t.scalars.emplace_back("entropy_K", fmt15(k_entropy));
        t.scalars.emplace_back("window_minimizer_sum", fmt15(witness.sum));
        t.scalars.emplace_back("window_minimizer_bound", fmt15(witness.bound));
        t.scalars.emplace_back("window_minimizer_holds", witness.holds ? "1" : "0");
        t.columns = {"n", "Q", "f", "v"};
        for (std::size_t n = 0; n < seq.q.size(); ++n)
            t.rows.push_back({std::to_string(n), fmt15(seq.q[n]), fmt15(seq.f[n]),
                              fmt15(seq.v[n])});
        emit(t, "a2", format, output);
        return 0;
    }

    if (conv->parsed()) {
        const Json j = load_json(input);
        Json converted;
        if (j.contains("density") || j.contains("L")) {
            canon::StringSpec s = canon::string_from_json(j);
            if (dualize) s = canon::dual_string(s);
            converted = canon::hamiltonian_to_json(canon::string_to_hamiltonian(s));
        } else {
            canon::Hamiltonian h = canon::hamiltonian_from_json(j);
            if (dualize) h = canon::dual(h);
            converted = canon::string_to_json(canon::hamiltonian_to_string(h));
        }
        const std::string text = converted.dump(2) + "\n";
        if (output.empty()) {
            std::cout << text;
        } else {
            std::ofstream out(output);
            if (!out)
                throw std::invalid_argument("cannot open output file '" + output + "'");
            out << text;
        }
        return 0;
    }

    if (ana->parsed()) {
        const canon::StringSpec s = canon::string_from_json(load_json(input));
        const auto tpts = canon::string_t_points(s, nmax);
        const auto characteristic = canon::string_characteristic(s);
        Table t;
        t.scalars.emplace_back("L", fmt15(s.length()));
        t.scalars.emplace_back("characteristic", fmt15(characteristic.total));
        t.scalars.emplace_back("terms", fmt15(double(characteristic.terms.size())));
        t.scalars.emplace_back("szego_log_integral",
                               fmt15(canon::szego_log_integral(s)));
        t.columns = {"n", "t", "M"};
        for (std::size_t n = 0; n < tpts.size(); ++n)
            t.rows.push_back({std::to_string(n), fmt15(tpts[n]), fmt15(s.mass(tpts[n]))});
        emit(t, "string analyze", format, output);
        return 0;
    }

    if (strq->parsed()) {
        const canon::StringSpec s = canon::string_from_json(load_json(input));
        const GridSpec grid = parse_grid(grid_text);
        const std::vector<double> xs = grid.points();
        std::vector<Complex> q(xs.size());
        canon::parallel_map(xs.size(), [&](std::size_t k) {
            q[k] = canon::q_function(s, Complex(xs[k], imag_part));
        });
        Table t;
        t.columns = {"re_z", "im_z", "re_q", "im_q"};
        for (std::size_t k = 0; k < xs.size(); ++k)
            t.rows.push_back({fmt15(xs[k]), fmt15(imag_part), fmt15(std::real(q[k])),
                              fmt15(std::imag(q[k]))});
        emit(t, "string q", format, output);
        return 0;
    }

    if (ver->parsed()) {
        const auto checks = canon::run_verify();
        std::ostringstream out;
        bool all = true;
        for (const auto& c : checks) {
            all = all && c.pass;
            out << (c.pass ? "PASS " : "FAIL ") << c.name
                << "  residual=" << fmt15(c.residual)
                << " threshold=" << fmt15(c.threshold) << "\n";
        }
        out << (all ? "VERIFY OK" : "VERIFY FAILED") << " (" << checks.size()
            << " checks)\n";
        if (output.empty()) {
            std::cout << out.str();
        } else {
            std::ofstream f(output);
            if (!f) throw std::invalid_argument("cannot open output file '" + output + "'");
            f << out.str();
        }
        return all ? 0 : 1;
    }

    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const canon::hypothesis_error& e) {
        std::cerr << "hypothesis violated: " << e.what() << "\n";
        return 3;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
