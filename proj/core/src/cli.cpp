#include <gpreli/cli.hpp>

#include <gpreli/config.hpp>
#include <gpreli/csv.hpp>
#include <gpreli/designs.hpp>
#include <gpreli/error.hpp>
#include <gpreli/experiments.hpp>
#include <gpreli/gp.hpp>
#include <gpreli/kernels.hpp>
#include <gpreli/reliability.hpp>
#include <gpreli/svg.hpp>

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

namespace gpreli {

namespace {

namespace fs = std::filesystem;

// ---- small CSV readers for the data-driven subcommands ----

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(field);
            field.clear();
        } else if (c != '\r') {
            field += c;
        }
    }
    fields.push_back(field);
    return fields;
}

double parse_double_field(const std::string& text, const std::string& context) {
    char* end = nullptr;
    const double value = std::strtod(text.c_str(), &end);
    if (end == text.c_str() || *end != '\0') {
        throw input_error("cannot parse '" + text + "' as a number in " + context);
    }
    return value;
}

Eigen::MatrixXd read_points_csv(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open '" + path.string() + "'");
    std::string line;
    if (!std::getline(in, line)) {
        throw input_error("'" + path.string() + "' is empty");
    }
    const std::size_t dim = split_csv_line(line).size();
    std::vector<double> values;
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != dim) {
            throw input_error("row " + std::to_string(rows + 1) + " of '" + path.string() +
                              "' has " + std::to_string(fields.size()) + " fields, expected " +
                              std::to_string(dim));
        }
        for (const auto& f : fields) values.push_back(parse_double_field(f, path.string()));
        ++rows;
    }
    if (rows == 0) throw input_error("'" + path.string() + "' contains no data rows");
    Eigen::MatrixXd points(rows, dim);
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < dim; ++j) points(i, j) = values[i * dim + j];
    }
    return points;
}

Eigen::VectorXd read_values_csv(const fs::path& path) {
    const Eigen::MatrixXd m = read_points_csv(path);
    if (m.cols() != 1) {
        throw input_error("'" + path.string() + "' must have exactly one column, got " +
                          std::to_string(m.cols()));
    }
    return m.col(0);
}

// ---- shared flag bundles ----

struct KernelFlags {
    std::string family = "matern";
    double nu = 3.5;
    int dim = 1;
    double kappa = 1.0;
    double mu_gw = 3.0;

    KernelSpec to_spec() const {
        KernelSpec spec;
        if (family == "matern") {
            spec.family = KernelFamily::Matern;
        } else if (family == "generalized_wendland") {
            spec.family = KernelFamily::GeneralizedWendland;
        } else {
            throw parameter_error("--family must be 'matern' or 'generalized_wendland', got '" +
                                  family + "'");
        }
        spec.nu = nu;
        spec.dim = dim;
        spec.kappa = kappa;
        spec.mu_gw = mu_gw;
        spec.validate();
        return spec;
    }
};

void add_kernel_flags(CLI::App* cmd, KernelFlags& flags) {
    cmd->add_option("--family", flags.family,
                    "Kernel family: matern or generalized_wendland")
        ->default_val("matern");
    cmd->add_option("--nu", flags.nu, "Matérn smoothness (requires nu > dim/2)")
        ->default_val(3.5);
    cmd->add_option("--dim", flags.dim, "Input dimension")->default_val(1);
    cmd->add_option("--kappa", flags.kappa, "Generalized Wendland shape (kappa > 0)")
        ->default_val(1.0);
    cmd->add_option("--mu-gw", flags.mu_gw,
                    "Generalized Wendland exponent (mu >= (dim+1)/2 + kappa)")
        ->default_val(3.0);
}

struct ModelFlags {
    std::string design_path;
    std::string values_path;
    double jitter = 1e-8;
    double beta = 0.05;
    double mu_alpha = 0.0;
    double mu_c = 1.0;
    CLI::Option* mu_alpha_opt = nullptr;
};

void add_model_flags(CLI::App* cmd, ModelFlags& flags, bool needs_values) {
    cmd->add_option("--design", flags.design_path, "CSV of design points (header x1[,x2,...])")
        ->required();
    if (needs_values) {
        cmd->add_option("--values", flags.values_path, "CSV of observations (one column)")
            ->required();
    }
    cmd->add_option("--jitter", flags.jitter, "Initial diagonal jitter")->default_val(1e-8);
    cmd->add_option("--beta", flags.beta, "Confidence level parameter in (0,1)")
        ->default_val(0.05);
    flags.mu_alpha_opt = cmd->add_option(
        "--mu-alpha", flags.mu_alpha, "Regularization exponent: mu = c * n^alpha (alpha < 1)");
    cmd->add_option("--mu-c", flags.mu_c, "Regularization coefficient c > 0")
        ->needs(flags.mu_alpha_opt);
}

FitConfig make_fit_config(const ModelFlags& flags) {
    FitConfig fc;
    fc.beta = flags.beta;
    fc.jitter = flags.jitter;
    if (flags.mu_alpha_opt != nullptr && flags.mu_alpha_opt->count() > 0) {
        fc.mu_mode = MuMode::PowerLaw;
        fc.mu_alpha = flags.mu_alpha;
        fc.mu_c = flags.mu_c;
    }
    return fc;
}

FittedModel fit_from_flags(const KernelFlags& kernel_flags, const ModelFlags& model_flags,
                           bool needs_values) {
    const KernelSpec kernel = kernel_flags.to_spec();
    Design design;
    design.points = read_points_csv(model_flags.design_path);
    design.kind = DesignKind::UniformRandom; // provenance unknown; irrelevant to fitting
    if (design.dim() != kernel.dim) {
        throw shape_error("design in '" + model_flags.design_path + "' has dim " +
                          std::to_string(design.dim()) + ", --dim says " +
                          std::to_string(kernel.dim));
    }
    Eigen::VectorXd y;
    if (needs_values) {
        y = read_values_csv(model_flags.values_path);
    } else {
        y = Eigen::VectorXd::Zero(design.n());
    }
    return fit(design, y, kernel, make_fit_config(model_flags));
}

// ---- output-directory policy ----

void prepare_out_dir(const fs::path& out_dir, bool overwrite) {
    if (fs::exists(out_dir)) {
        if (!fs::is_directory(out_dir)) {
            throw usage_error("output path '" + out_dir.string() + "' exists and is not a directory");
        }
        if (!fs::is_empty(out_dir) && !overwrite) {
            throw usage_error("output directory '" + out_dir.string() +
                              "' is not empty; pass --overwrite to reuse it");
        }
    } else {
        fs::create_directories(out_dir);
    }
}

std::string model_summary_json(const FittedModel& model) {
    std::string json = "{\n";
    json += "  \"n\": " + std::to_string(model.n()) + ",\n";
    json += "  \"mu_hat\": " + format_double(model.mu_hat) + ",\n";
    json += "  \"jitter_used\": " + format_double(model.jitter_used) + ",\n";
    json += "  \"sigma2_hat\": " + format_double(model.sigma2_hat) + "\n";
    json += "}\n";
    return json;
}

// ---- experiment SVG panels ----

void emit_deterministic_svgs(const DeterministicResult& result, const fs::path& out_dir) {
    {
        SvgPanel panel;
        panel.title = "E vs design size";
        panel.x_label = "n";
        panel.y_label = "E";
        SvgSeries s{"E", {}, {}, "#1f63a8", true, true};
        for (const auto& row : result.rows) {
            s.x.push_back(static_cast<double>(row.n));
            s.y.push_back(row.e_mle);
        }
        panel.series.push_back(std::move(s));
        emit_svg_panel(panel, out_dir / "panel1.svg");
    }
    emit_svg_panel(result.mle_report, out_dir / "panel2.svg");
    for (int which : {3, 4}) {
        SvgPanel panel;
        panel.title = which == 3 ? "sup ratio, constant variance" : "sup ratio, unscaled variance";
        panel.x_label = "n";
        panel.y_label = "sup ratio";
        panel.log_x = true;
        panel.log_y = true;
        SvgSeries s{"ratio", {}, {}, "#1f63a8", true, true};
        for (const auto& row : result.rows) {
            s.x.push_back(static_cast<double>(row.n));
            s.y.push_back(which == 3 ? row.ratio_constant : row.ratio_unscaled);
        }
        panel.series.push_back(std::move(s));
        emit_svg_panel(panel, out_dir / ("panel" + std::to_string(which) + ".svg"));
    }
}

void emit_stochastic_svg(const StochasticResult& result, const fs::path& out_dir) {
    SvgPanel panel;
    panel.title = "mean squared L2 error vs design size";
    panel.x_label = "n";
    panel.y_label = "mean error^2";
    panel.log_x = true;
    panel.log_y = true;
    const char* colors[] = {"#1f63a8", "#c0392b", "#1e8449", "#8e44ad", "#b7950b"};
    const std::size_t n_count = result.config.n_list.size();
    for (std::size_t ai = 0; ai < result.config.alpha_list.size(); ++ai) {
        SvgSeries s;
        s.label = "alpha=" + format_double(result.config.alpha_list[ai]);
        s.color = colors[ai % 5];
        s.draw_line = true;
        for (std::size_t ni = 0; ni < n_count; ++ni) {
            const StochasticCell& cell = result.cells[ai * n_count + ni];
            s.x.push_back(static_cast<double>(cell.n));
            s.y.push_back(cell.mean_error_sq);
        }
        panel.series.push_back(std::move(s));
    }
    emit_svg_panel(panel, out_dir / "errors.svg");
}

void emit_baseline_svg(const GpBaselineResult& result, const fs::path& out_dir) {
    SvgPanel panel;
    panel.title = "E^(1/p) vs design size";
    panel.x_label = "n";
    panel.y_label = "E^(1/p)";
    SvgSeries s{"E_root", {}, {}, "#1f63a8", true, true};
    for (const auto& row : result.rows) {
        s.x.push_back(static_cast<double>(row.n));
        s.y.push_back(row.e_root);
    }
    panel.series.push_back(std::move(s));
    emit_svg_panel(panel, out_dir / "baseline.svg");
}

// ---- experiment dispatch ----

struct ExperimentFlags {
    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool overwrite = false;
    CLI::Option* seed_opt = nullptr;
};

void add_experiment_flags(CLI::App* cmd, ExperimentFlags& flags) {
    cmd->add_option("--config", flags.config_path, "JSON config file (defaults applied)");
    cmd->add_option("--out", flags.out_dir, "Output directory")->required();
    flags.seed_opt =
        cmd->add_option("--seed", flags.seed, "Master seed override (unsigned 64-bit)");
    cmd->add_flag("--overwrite", flags.overwrite, "Reuse a non-empty output directory");
}

ExperimentConfig resolve_experiment_config(const ExperimentFlags& flags,
                                           ExperimentProfile profile) {
    RawConfig raw;
    if (!flags.config_path.empty()) {
        raw = load_raw_config(flags.config_path);
    }
    if (flags.seed_opt != nullptr && flags.seed_opt->count() > 0) {
        raw.master_seed = flags.seed; // flag beats file beats default
    }
    return resolve_config(raw, profile);
}

void run_experiment_command(const ExperimentFlags& flags, ExperimentProfile profile) {
    const ExperimentConfig config = resolve_experiment_config(flags, profile);
    prepare_out_dir(flags.out_dir, flags.overwrite);
    switch (profile) {
    case ExperimentProfile::Deterministic: {
        const DeterministicResult result = run_deterministic_experiment(config);
        write_experiment_outputs(result, flags.out_dir);
        emit_deterministic_svgs(result, flags.out_dir);
        std::cout << "panel2 slope: " << format_double(result.mle_report.fit.slope) << "\n";
        break;
    }
    case ExperimentProfile::Stochastic: {
        const StochasticResult result = run_stochastic_experiment(config);
        write_experiment_outputs(result, flags.out_dir);
        emit_stochastic_svg(result, flags.out_dir);
        for (std::size_t ai = 0; ai < result.error_slopes.size(); ++ai) {
            std::cout << "alpha " << format_double(config.alpha_list[ai])
                      << " error slope: " << format_double(result.error_slopes[ai].slope)
                      << "\n";
        }
        break;
    }
    case ExperimentProfile::GpBaseline: {
        const GpBaselineResult result = run_gp_baseline(config);
        write_experiment_outputs(result, flags.out_dir);
        emit_baseline_svg(result, flags.out_dir);
        std::cout << "E^(1/p) spread: " << format_double(result.max_spread) << "\n";
        break;
    }
    }
    std::cout << "outputs written to " << flags.out_dir << "\n";
}

} // namespace

int parse_and_dispatch(int argc, const char* const* argv) {
    CLI::App app{"Kriging confidence-band reliability toolkit"};
    app.name("gpreli"); // keep --help output independent of the invocation path
    app.require_subcommand(1);

    // kernel-eval
    auto* kernel_eval = app.add_subcommand("kernel-eval", "Evaluate a correlation kernel at a lag");
    auto kernel_eval_kernel = std::make_shared<KernelFlags>();
    auto kernel_eval_r = std::make_shared<double>(0.0);
    add_kernel_flags(kernel_eval, *kernel_eval_kernel);
    kernel_eval->add_option("--r", *kernel_eval_r, "Lag distance (r >= 0)")->required();
    kernel_eval->callback([kernel_eval_kernel, kernel_eval_r]() {
        const KernelSpec spec = kernel_eval_kernel->to_spec();
        std::cout << format_double(kernel_corr(*kernel_eval_r, spec)) << "\n";
    });

    // fit
    auto* fit_cmd = app.add_subcommand("fit", "Fit a kriging model to design/observation CSVs");
    auto fit_kernel = std::make_shared<KernelFlags>();
    auto fit_model = std::make_shared<ModelFlags>();
    auto fit_out = std::make_shared<std::string>();
    add_kernel_flags(fit_cmd, *fit_kernel);
    add_model_flags(fit_cmd, *fit_model, true);
    fit_cmd->add_option("--out", *fit_out, "Directory for model.json");
    fit_cmd->callback([fit_kernel, fit_model, fit_out]() {
        const FittedModel model = fit_from_flags(*fit_kernel, *fit_model, true);
        const std::string summary = model_summary_json(model);
        if (!fit_out->empty()) {
            fs::create_directories(*fit_out);
            write_text_file(fs::path(*fit_out) / "model.json", summary);
        }
        std::cout << summary;
    });

    // predict
    auto* predict_cmd =
        app.add_subcommand("predict", "Evaluate the confidence band at evaluation points");
    auto predict_kernel = std::make_shared<KernelFlags>();
    auto predict_model = std::make_shared<ModelFlags>();
    auto predict_eval = std::make_shared<std::string>();
    auto predict_out = std::make_shared<std::string>();
    auto predict_overwrite = std::make_shared<bool>(false);
    add_kernel_flags(predict_cmd, *predict_kernel);
    add_model_flags(predict_cmd, *predict_model, true);
    predict_cmd->add_option("--eval", *predict_eval, "CSV of evaluation points")->required();
    predict_cmd->add_option("--out", *predict_out, "Output directory")->required();
    predict_cmd->add_flag("--overwrite", *predict_overwrite, "Reuse a non-empty output directory");
    predict_cmd->callback(
        [predict_kernel, predict_model, predict_eval, predict_out, predict_overwrite]() {
            const FittedModel model = fit_from_flags(*predict_kernel, *predict_model, true);
            const Eigen::MatrixXd evals = read_points_csv(*predict_eval);
            const PredictionBand band = confidence_band(model, evals);
            prepare_out_dir(*predict_out, *predict_overwrite);
            write_band_csv(band, fs::path(*predict_out) / "band.csv");
            emit_svg_panel(band, fs::path(*predict_out) / "band.svg");
            std::cout << "band written to " << *predict_out << "\n";
        });

    // power
    auto* power_cmd =
        app.add_subcommand("power", "Evaluate the power function over probe points");
    auto power_kernel = std::make_shared<KernelFlags>();
    auto power_model = std::make_shared<ModelFlags>();
    auto power_eval = std::make_shared<std::string>();
    auto power_out = std::make_shared<std::string>();
    auto power_overwrite = std::make_shared<bool>(false);
    add_kernel_flags(power_cmd, *power_kernel);
    add_model_flags(power_cmd, *power_model, false);
    power_cmd->add_option("--eval", *power_eval,
                          "CSV of probe points (default: 512 Halton + design midpoints)");
    power_cmd->add_option("--out", *power_out, "Output directory for power.csv");
    power_cmd->add_flag("--overwrite", *power_overwrite, "Reuse a non-empty output directory");
    power_cmd->callback([power_kernel, power_model, power_eval, power_out, power_overwrite]() {
        const FittedModel model = fit_from_flags(*power_kernel, *power_model, false);
        const Eigen::MatrixXd probes = power_eval->empty()
                                           ? default_power_probes(model.design)
                                           : read_points_csv(*power_eval);
        const Eigen::VectorXd powers = power_function(model, probes);
        if (!power_out->empty()) {
            prepare_out_dir(*power_out, *power_overwrite);
            std::vector<std::string> header;
            for (int j = 0; j < probes.cols(); ++j) {
                header.push_back("x" + std::to_string(j + 1));
            }
            header.push_back("power");
            std::vector<std::vector<std::string>> rows;
            for (int i = 0; i < probes.rows(); ++i) {
                std::vector<std::string> row;
                for (int j = 0; j < probes.cols(); ++j) {
                    row.push_back(format_double(probes(i, j)));
                }
                row.push_back(format_double(powers(i)));
                rows.push_back(std::move(row));
            }
            write_csv(fs::path(*power_out) / "power.csv", header, rows);
        }
        std::cout << "sup_power: " << format_double(sup_power(model, probes)) << "\n";
    });

    // reliability
    auto* rel_cmd = app.add_subcommand(
        "reliability", "Fit the log-log reliability regression to an (n,E) table");
    auto rel_data = std::make_shared<std::string>();
    auto rel_p = std::make_shared<double>(4.0);
    auto rel_out = std::make_shared<std::string>();
    auto rel_overwrite = std::make_shared<bool>(false);
    rel_cmd->add_option("--data", *rel_data, "CSV with columns n,E")->required();
    rel_cmd->add_option("--p", *rel_p, "Ratio-metric exponent p >= 2")->default_val(4.0);
    rel_cmd->add_option("--out", *rel_out, "Output directory");
    rel_cmd->add_flag("--overwrite", *rel_overwrite, "Reuse a non-empty output directory");
    rel_cmd->callback([rel_data, rel_p, rel_out, rel_overwrite]() {
        const Eigen::MatrixXd table = read_points_csv(*rel_data);
        if (table.cols() < 2) {
            throw input_error("reliability table needs columns n,E, got " +
                              std::to_string(table.cols()) + " column(s)");
        }
        std::vector<std::pair<int, double>> rows;
        long infinite_count = 0;
        for (int i = 0; i < table.rows(); ++i) {
            const double e = table(i, 1);
            if (!std::isfinite(e)) ++infinite_count;
            rows.emplace_back(static_cast<int>(table(i, 0)), e);
        }
        const ReliabilityReport report =
            make_reliability_report(*rel_p, std::move(rows), infinite_count);
        if (!rel_out->empty()) {
            prepare_out_dir(*rel_out, *rel_overwrite);
            write_reliability_csv(report, fs::path(*rel_out) / "reliability.csv",
                                  fs::path(*rel_out) / "reliability.json");
            emit_svg_panel(report, fs::path(*rel_out) / "reliability.svg");
        }
        std::cout << "slope: " << format_double(report.fit.slope)
                  << " intercept: " << format_double(report.fit.intercept)
                  << " r2: " << format_double(report.fit.r2) << "\n";
    });

    // experiment
    auto* experiment = app.add_subcommand("experiment", "Run a full reliability experiment");
    experiment->require_subcommand(1);
    auto det_flags = std::make_shared<ExperimentFlags>();
    auto* det_cmd = experiment->add_subcommand(
        "deterministic", "Fixed test function on grids; panels 1-4");
    add_experiment_flags(det_cmd, *det_flags);
    det_cmd->callback([det_flags]() {
        run_experiment_command(*det_flags, ExperimentProfile::Deterministic);
    });
    auto sto_flags = std::make_shared<ExperimentFlags>();
    auto* sto_cmd = experiment->add_subcommand(
        "stochastic", "Noisy observations, random designs, alpha sweep");
    add_experiment_flags(sto_cmd, *sto_flags);
    sto_cmd->callback([sto_flags]() {
        run_experiment_command(*sto_flags, ExperimentProfile::Stochastic);
    });
    auto gpb_flags = std::make_shared<ExperimentFlags>();
    auto* gpb_cmd = experiment->add_subcommand(
        "gp-baseline", "Well-specified GP paths with true-variance bands");
    add_experiment_flags(gpb_cmd, *gpb_flags);
    gpb_cmd->callback([gpb_flags]() {
        run_experiment_command(*gpb_flags, ExperimentProfile::GpBaseline);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e); // prints the message and usage hint
        return 1;
    } catch (const usage_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const numeric_error& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

} // namespace gpreli
