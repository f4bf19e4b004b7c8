#include "cli.hpp"

#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "kwle/dataset.hpp"
#include "kwle/errors.hpp"
#include "kwle/gof.hpp"
#include "kwle/lfit.hpp"
#include "kwle/mlefit.hpp"
#include "kwle/montecarlo.hpp"
#include "kwle/weights.hpp"

namespace kwle::cli {

namespace {

using nlohmann::json;

json number_or_null(double v) {
    if (std::isnan(v)) return nullptr;
    return v;
}

KumaraswamyShape parse_shape(const std::string& text) {
    const auto comma = text.find(',');
    if (comma == std::string::npos)
        throw ParseError("--weights expects 'A,B', got '" + text + "'");
    double a, b;
    try {
        a = std::stod(text.substr(0, comma));
        b = std::stod(text.substr(comma + 1));
    } catch (const std::exception&) {
        throw ParseError("--weights expects two numbers 'A,B', got '" + text + "'");
    }
    return KumaraswamyShape(a, b);
}

std::vector<double> parse_list(const std::string& text, const std::string& flag) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            out.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw ParseError(flag + " expects a comma list of numbers, got '" + text + "'");
        }
    }
    if (out.empty()) throw ParseError(flag + ": empty list");
    return out;
}

HeaderMode parse_header_mode(const std::string& text) {
    if (text == "auto") return HeaderMode::auto_detect;
    if (text == "yes") return HeaderMode::yes;
    if (text == "no") return HeaderMode::no;
    throw ParseError("--header expects auto|yes|no, got '" + text + "'");
}

struct InputOptions {
    std::string path;
    std::string column;
    std::string header = "auto";
    double replace_max_value = 0.0;
    bool do_replace_max = false;
};

LossDataset load_input(const InputOptions& in) {
    ColumnRef col;
    if (!in.column.empty()) {
        // numeric string = index, otherwise a column name
        char* end = nullptr;
        const long idx = std::strtol(in.column.c_str(), &end, 10);
        if (end && *end == '\0' && idx >= 0)
            col.index = static_cast<std::size_t>(idx);
        else
            col.name = in.column;
    }
    LossDataset data = load_csv(in.path, col, parse_header_mode(in.header));
    if (in.do_replace_max) data = replace_max(data, in.replace_max_value);
    return data;
}

json params_json(const ModelSpec& spec, const ModelParams& p) {
    json out;
    const auto names = param_names(spec.family);
    const auto values = param_vector(spec, p);
    for (int j = 0; j < param_count(spec.family); ++j) out[names[j]] = values[j];
    return out;
}

json cov_json(const Matrix2& m) {
    if (m.k == 1) return json::array({json::array({number_or_null(m.a11)})});
    return json::array({json::array({number_or_null(m.a11), number_or_null(m.a12)}),
                        json::array({number_or_null(m.a12), number_or_null(m.a22)})});
}

json fit_json(const FitResult& fit, const std::optional<KsResult>& ks) {
    json out;
    out["model"] = family_name(fit.spec.family);
    if (fit.shape) {
        out["a"] = fit.shape->a;
        out["b"] = fit.shape->b;
    } else {
        out["a"] = nullptr;
        out["b"] = nullptr;
    }
    out["params"] = params_json(fit.spec, fit.params);
    out["cov_over_n"] = cov_json(fit.cov_over_n);
    out["are"] = number_or_null(fit.are_vs_mle);
    if (ks) out["ks"] = {{"d", ks->d}, {"p", ks->p_value}, {"reject", ks->reject_at_5pct}};
    out["warnings"] = fit.warnings;
    return out;
}

void emit(std::ostream& out, const std::string& out_path, const std::string& text) {
    if (out_path.empty()) {
        out << text;
        if (!text.empty() && text.back() != '\n') out << '\n';
    } else {
        std::ofstream f(out_path);
        if (!f) throw Error("cannot open output file '" + out_path + "'");
        f << text;
    }
}

struct ModelFlags {
    std::string model;
    double x0 = 0.0;
    bool x0_given = false;
};

ModelSpec resolve_spec(const ModelFlags& mf) {
    ModelSpec spec;
    spec.family = family_from_name(mf.model);
    if (spec.family == Family::pareto_i) {
        if (!mf.x0_given) throw ParseError("--x0 is required for the pareto model");
        spec.x0 = mf.x0;
    } else if (spec.family == Family::lognormal) {
        spec.x0 = mf.x0_given ? mf.x0 : 0.0;
    }
    return spec;
}

FitResult fit_with(const ModelSpec& spec, const std::optional<KumaraswamyShape>& shape,
                   const SortedSample& sample) {
    if (!shape) {
        switch (spec.family) {
            case Family::pareto_i: return mle_pareto(sample, spec.x0);
            case Family::lognormal: return mle_lognormal(sample, spec.x0);
            case Family::frechet: return mle_frechet(sample);
        }
        throw std::domain_error("invalid family");
    }
    switch (spec.family) {
        case Family::pareto_i: return fit_pareto(sample, *shape, spec.x0);
        case Family::lognormal: return fit_lognormal(sample, *shape, spec.x0);
        case Family::frechet: return fit_frechet(sample, *shape);
    }
    throw std::domain_error("invalid family");
}

std::string csv_grid(const AreGrid& grid) {
    std::ostringstream os;
    os.precision(10);
    os << "a\\b";
    for (double b : grid.b_values) os << "," << b;
    os << "\n";
    for (std::size_t i = 0; i < grid.a_values.size(); ++i) {
        os << grid.a_values[i];
        for (std::size_t j = 0; j < grid.b_values.size(); ++j) {
            os << ",";
            if (grid.errors[i][j].empty()) os << grid.values[i][j];
        }
        os << "\n";
    }
    return os.str();
}

json report_json(const SimulationReport& r) {
    json out;
    out["model"] = family_name(r.family);
    const auto names = param_names(r.family);
    json truth;
    for (int j = 0; j < r.k; ++j) truth[names[j]] = r.truth[j];
    out["truth"] = truth;
    out["reps_per_batch"] = r.reps_per_batch;
    out["batches"] = r.batches;
    out["master_seed"] = r.master_seed;
    json cells = json::array();
    for (const auto& c : r.cells) {
        json jc;
        jc["estimator"] = c.estimator;
        jc["a"] = std::isnan(c.a) ? json(nullptr) : json(c.a);
        jc["b"] = std::isnan(c.b) ? json(nullptr) : json(c.b);
        jc["n"] = c.n;
        json sm = json::object(), sme = json::object();
        for (int j = 0; j < r.k; ++j) {
            sm[names[j]] = number_or_null(c.std_mean[j]);
            sme[names[j]] = number_or_null(c.std_mean_se[j]);
        }
        jc["std_mean"] = sm;
        jc["std_mean_se"] = sme;
        jc["re"] = number_or_null(c.re);
        jc["re_se"] = number_or_null(c.re_se);
        jc["failures"] = c.failures;
        cells.push_back(jc);
    }
    out["cells"] = cells;
    return out;
}

int dispatch(int argc, const char* const* argv, std::ostream& out) {
    CLI::App app{"Kumaraswamy-weighted L-estimation of claim severity models"};
    app.require_subcommand(1);

    ModelFlags mf;
    std::vector<std::string> weight_args;
    bool use_mle = false;
    InputOptions input;
    std::string out_path, format = "json";

    // ---- fit ----
    auto* fit_cmd = app.add_subcommand("fit", "Fit a severity model to a loss CSV");
    fit_cmd->add_option("--model", mf.model, "pareto|lognormal|frechet")->required();
    auto* fit_x0 = fit_cmd->add_option("--x0", mf.x0, "threshold (pareto: required, lognormal: default 0)");
    fit_cmd->add_option("--weights", weight_args, "Kumaraswamy shape 'A,B' (repeatable)");
    fit_cmd->add_flag("--mle", use_mle, "also (or only) fit by maximum likelihood");
    fit_cmd->add_option("--input", input.path, "one-column loss CSV")->required();
    fit_cmd->add_option("--column", input.column, "column name or zero-based index (default 0)");
    fit_cmd->add_option("--header", input.header, "auto|yes|no (default auto)");
    auto* fit_rm = fit_cmd->add_option("--replace-max", input.replace_max_value,
                                       "replace the largest observation before fitting");
    bool with_ks = false;
    fit_cmd->add_flag("--ks", with_ks, "attach a Kolmogorov-Smirnov block to each fit");
    fit_cmd->add_option("--out", out_path, "write output to a file instead of stdout");
    fit_cmd->add_option("--format", format, "json (default)");

    // ---- are ----
    auto* are_cmd = app.add_subcommand("are", "Asymptotic relative efficiency vs the MLE");
    std::string are_model;
    double are_a = 0.0, are_b = 0.0;
    std::string a_grid, b_grid;
    are_cmd->add_option("--model", are_model, "pareto|lognormal|frechet")->required();
    auto* oa = are_cmd->add_option("--a", are_a, "single lower-tail shape");
    auto* ob = are_cmd->add_option("--b", are_b, "single upper-tail shape");
    auto* oga = are_cmd->add_option("--a-grid", a_grid, "comma list of a values");
    auto* ogb = are_cmd->add_option("--b-grid", b_grid, "comma list of b values");
    are_cmd->add_option("--out", out_path, "write output to a file instead of stdout");
    are_cmd->add_option("--format", format, "json|csv");

    // ---- simulate ----
    auto* sim_cmd = app.add_subcommand("simulate", "Batched sampling study of estimator efficiency");
    std::string sim_model;
    double sim_alpha = 0.0, sim_theta = 0.0, sim_sigma = 0.0, sim_x0 = 0.0;
    bool sim_x0_given = false;
    std::string n_list = "1000";
    int reps = 1000, batches = 10, threads = 0;
    std::uint64_t seed = 0;
    sim_cmd->add_option("--model", sim_model, "pareto|lognormal|frechet")->required();
    auto* sa = sim_cmd->add_option("--alpha", sim_alpha, "true shape (pareto default 0.75, frechet default 2)");
    auto* st = sim_cmd->add_option("--theta", sim_theta, "true log-location (lognormal default 5)");
    auto* ss = sim_cmd->add_option("--sigma", sim_sigma, "true scale (lognormal default 3, frechet default 2)");
    auto* sx0 = sim_cmd->add_option("--x0", sim_x0, "pareto threshold (default 1)");
    sim_cmd->add_option("--weights", weight_args, "Kumaraswamy shape 'A,B' (repeatable)");
    sim_cmd->add_flag("--mle", use_mle, "include the MLE estimator");
    sim_cmd->add_option("--n", n_list, "comma list of sample sizes (default 1000)");
    sim_cmd->add_option("--reps", reps, "replications per batch (default 1000)");
    sim_cmd->add_option("--batches", batches, "number of batches (default 10)");
    sim_cmd->add_option("--seed", seed, "master seed (required)")->required();
    sim_cmd->add_option("--threads", threads, "worker threads (default: hardware)");
    sim_cmd->add_option("--out", out_path, "write output to a file instead of stdout");
    sim_cmd->add_option("--format", format, "json|csv");

    // ---- ks ----
    auto* ks_cmd = app.add_subcommand("ks", "One-sample Kolmogorov-Smirnov goodness of fit");
    ModelFlags ks_mf;
    double ks_alpha = 0.0, ks_theta = 0.0, ks_sigma = 0.0;
    std::string qq_out;
    ks_cmd->add_option("--model", ks_mf.model, "pareto|lognormal|frechet")->required();
    auto* kx0 = ks_cmd->add_option("--x0", ks_mf.x0, "threshold");
    auto* ka = ks_cmd->add_option("--alpha", ks_alpha, "shape of the null model");
    auto* kt = ks_cmd->add_option("--theta", ks_theta, "log-location of the null model");
    auto* ksg = ks_cmd->add_option("--sigma", ks_sigma, "scale of the null model");
    ks_cmd->add_option("--weights", weight_args, "fit this Kumaraswamy shape first, then test");
    ks_cmd->add_flag("--mle", use_mle, "fit by maximum likelihood first, then test");
    ks_cmd->add_option("--input", input.path, "one-column loss CSV")->required();
    ks_cmd->add_option("--column", input.column, "column name or zero-based index");
    ks_cmd->add_option("--header", input.header, "auto|yes|no (default auto)");
    auto* ks_rm = ks_cmd->add_option("--replace-max", input.replace_max_value,
                                     "replace the largest observation before testing");
    ks_cmd->add_option("--qq-out", qq_out, "also write QQ pairs as two-column CSV");
    ks_cmd->add_option("--out", out_path, "write output to a file instead of stdout");

    // ---- weights ----
    auto* w_cmd = app.add_subcommand("weights", "Evaluate the weight-generating density");
    double wa = 1.0, wb = 1.0;
    std::size_t wn = 0;
    w_cmd->add_option("--a", wa, "lower-tail shape")->required();
    w_cmd->add_option("--b", wb, "upper-tail shape")->required();
    w_cmd->add_option("--n", wn, "sample size (weights at i/(n+1))")->required();
    w_cmd->add_option("--input", input.path, "optional loss CSV: adds order statistics and weighted values");
    w_cmd->add_option("--column", input.column, "column name or zero-based index");
    w_cmd->add_option("--header", input.header, "auto|yes|no (default auto)");
    w_cmd->add_option("--out", out_path, "write output to a file instead of stdout");
    auto* w_fmt = w_cmd->add_option("--format", format, "csv (default) | json");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        app.exit(e, out, out);
        return exit_ok;
    }

    mf.x0_given = fit_x0->count() > 0;
    sim_x0_given = sx0->count() > 0;
    input.do_replace_max = (fit_rm->count() > 0) || (ks_rm->count() > 0);

    if (*fit_cmd) {
        const ModelSpec spec = resolve_spec(mf);
        const LossDataset data = load_input(input);
        const SortedSample sample = make_sorted_sample(data.values, data.source);

        std::vector<std::optional<KumaraswamyShape>> estimators;
        if (use_mle) estimators.push_back(std::nullopt);
        for (const auto& w : weight_args) estimators.push_back(parse_shape(w));
        if (estimators.empty())
            throw ParseError("fit: give --mle and/or at least one --weights A,B");

        json results = json::array();
        for (const auto& shape : estimators) {
            FitResult fit = fit_with(spec, shape, sample);
            std::optional<KsResult> ks;
            if (with_ks) ks = ks_test(sample, fit.spec, fit.params);
            results.push_back(fit_json(fit, ks));
        }
        emit(out, out_path, results.size() == 1 ? results.front().dump(2) : results.dump(2));
        return exit_ok;
    }

    if (*are_cmd) {
        const Family family = family_from_name(are_model);
        std::vector<double> avals, bvals;
        if (oga->count() || ogb->count()) {
            if (!oga->count() || !ogb->count())
                throw ParseError("are: give both --a-grid and --b-grid");
            avals = parse_list(a_grid, "--a-grid");
            bvals = parse_list(b_grid, "--b-grid");
        } else {
            if (!oa->count() || !ob->count())
                throw ParseError("are: give --a and --b, or --a-grid and --b-grid");
            avals = {are_a};
            bvals = {are_b};
        }
        const AreGrid grid = are_grid(family, avals, bvals);
        // single-cell mode reports a failure as a process error
        if (avals.size() == 1 && bvals.size() == 1 && !grid.errors[0][0].empty())
            throw QuadratureError(grid.errors[0][0]);
        if (format == "csv") {
            emit(out, out_path, csv_grid(grid));
        } else {
            json jg;
            jg["model"] = family_name(family);
            jg["a_values"] = grid.a_values;
            jg["b_values"] = grid.b_values;
            json rows = json::array();
            for (std::size_t i = 0; i < avals.size(); ++i) {
                json row = json::array();
                for (std::size_t j = 0; j < bvals.size(); ++j)
                    row.push_back(grid.errors[i][j].empty() ? json(grid.values[i][j])
                                                            : json(nullptr));
                rows.push_back(row);
            }
            jg["values"] = rows;
            json errs = json::array();
            for (const auto& row : grid.errors) errs.push_back(row);
            jg["errors"] = errs;
            emit(out, out_path, jg.dump(2));
        }
        return exit_ok;
    }

    if (*sim_cmd) {
        SimulationConfig cfg;
        cfg.model.family = family_from_name(sim_model);
        switch (cfg.model.family) {
            case Family::pareto_i:
                cfg.model.x0 = sim_x0_given ? sim_x0 : 1.0;
                cfg.truth = ModelParams::pareto(sa->count() ? sim_alpha : 0.75);
                break;
            case Family::lognormal:
                cfg.model.x0 = sim_x0_given ? sim_x0 : 0.0;
                cfg.truth = ModelParams::lognormal(st->count() ? sim_theta : 5.0,
                                                   ss->count() ? sim_sigma : 3.0);
                break;
            case Family::frechet:
                cfg.truth = ModelParams::frechet(sa->count() ? sim_alpha : 2.0,
                                                 ss->count() ? sim_sigma : 2.0);
                break;
        }
        if (use_mle) cfg.estimators.push_back(EstimatorSpec::mle());
        for (const auto& w : weight_args) {
            const KumaraswamyShape s = parse_shape(w);
            cfg.estimators.push_back(EstimatorSpec::kumaraswamy(s.a, s.b));
        }
        if (cfg.estimators.empty())
            throw ParseError("simulate: give --mle and/or at least one --weights A,B");
        for (double n : parse_list(n_list, "--n"))
            cfg.n_values.push_back(static_cast<std::size_t>(n));
        cfg.reps_per_batch = reps;
        cfg.batches = batches;
        cfg.master_seed = seed;
        cfg.threads = threads;

        const SimulationReport report = run_simulation(cfg);
        emit(out, out_path, format == "csv" ? report_to_csv(report) : report_json(report).dump(2));
        return exit_ok;
    }

    if (*ks_cmd) {
        const ModelSpec spec = [&] {
            ModelFlags m = ks_mf;
            m.x0_given = kx0->count() > 0;
            return resolve_spec(m);
        }();
        const LossDataset data = load_input(input);
        const SortedSample sample = make_sorted_sample(data.values, data.source);

        ModelParams params;
        json fitted = nullptr;
        const bool explicit_params = ka->count() || kt->count() || ksg->count();
        if (explicit_params) {
            switch (spec.family) {
                case Family::pareto_i: params = ModelParams::pareto(ks_alpha); break;
                case Family::lognormal: params = ModelParams::lognormal(ks_theta, ks_sigma); break;
                case Family::frechet: params = ModelParams::frechet(ks_alpha, ks_sigma); break;
            }
        } else {
            std::optional<KumaraswamyShape> shape;
            if (!weight_args.empty()) shape = parse_shape(weight_args.front());
            else if (!use_mle)
                throw ParseError("ks: give explicit parameters, --mle, or --weights A,B");
            const FitResult fit = fit_with(spec, shape, sample);
            params = fit.params;
            fitted = params_json(spec, params);
        }

        const KsResult r = ks_test(sample, spec, params);
        if (!qq_out.empty()) {
            std::ostringstream qq;
            qq.precision(10);
            qq << "theoretical,empirical\n";
            for (const auto& [tq, eq] : qq_data(sample, spec, params))
                qq << tq << "," << eq << "\n";
            std::ofstream f(qq_out);
            if (!f) throw Error("cannot open '" + qq_out + "'");
            f << qq.str();
        }
        json jr;
        jr["model"] = family_name(spec.family);
        jr["params"] = params_json(spec, params);
        jr["d"] = r.d;
        jr["p"] = r.p_value;
        jr["reject"] = r.reject_at_5pct;
        jr["n"] = r.n;
        if (!fitted.is_null()) jr["fitted"] = true;
        emit(out, out_path, jr.dump(2));
        return exit_ok;
    }

    if (*w_cmd) {
        if (!w_fmt->count()) format = "csv";
        const KumaraswamyShape shape(wa, wb);
        std::vector<double> xs;
        if (!input.path.empty()) {
            LossDataset data = load_csv(input.path, ColumnRef{}, parse_header_mode(input.header));
            xs = make_sorted_sample(data.values, data.source).values;
            if (wn != xs.size())
                throw ParseError("weights: --n must match the input size (" +
                                 std::to_string(xs.size()) + ")");
        }
        const std::vector<double> w = weight_vector(wn, shape);
        if (format == "json") {
            json rows = json::array();
            for (std::size_t i = 0; i < wn; ++i) {
                json row;
                row["i"] = i + 1;
                row["u"] = static_cast<double>(i + 1) / (static_cast<double>(wn) + 1.0);
                row["weight"] = w[i];
                if (!xs.empty()) {
                    row["x"] = xs[i];
                    row["weighted_x"] = w[i] * xs[i];
                }
                rows.push_back(row);
            }
            emit(out, out_path, rows.dump(2));
        } else {
            std::ostringstream os;
            os.precision(10);
            os << "i,u,weight" << (xs.empty() ? "" : ",x,weighted_x") << "\n";
            for (std::size_t i = 0; i < wn; ++i) {
                os << (i + 1) << "," << static_cast<double>(i + 1) / (static_cast<double>(wn) + 1.0)
                   << "," << w[i];
                if (!xs.empty()) os << "," << xs[i] << "," << w[i] * xs[i];
                os << "\n";
            }
            emit(out, out_path, os.str());
        }
        return exit_ok;
    }

    return exit_other;
}

json error_json(const std::string& type, const std::string& message) {
    json e;
    e["error"] = {{"type", type}, {"message", message}};
    return e;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    try {
        return dispatch(argc, argv, out);
    } catch (const CLI::ParseError& e) {
        out << error_json("usage", e.what()).dump(2) << "\n";
        return exit_parse;
    } catch (const ParseError& e) {
        out << error_json("parse", e.what()).dump(2) << "\n";
        return exit_parse;
    } catch (const SupportError& e) {
        out << error_json("support", e.what()).dump(2) << "\n";
        return exit_support;
    } catch (const NegativeVarianceProxyError& e) {
        json j = error_json("negative_variance_proxy", e.what());
        j["error"]["variance_proxy"] = e.variance_proxy();
        out << j.dump(2) << "\n";
        return exit_negative_variance;
    } catch (const QuadratureError& e) {
        out << error_json("quadrature", e.what()).dump(2) << "\n";
        return exit_quadrature;
    } catch (const DegenerateSampleError& e) {
        out << error_json("degenerate_sample", e.what()).dump(2) << "\n";
        return exit_degenerate;
    } catch (const std::domain_error& e) {
        out << error_json("usage", e.what()).dump(2) << "\n";
        return exit_parse;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_other;
    }
}

}  // namespace kwle::cli
