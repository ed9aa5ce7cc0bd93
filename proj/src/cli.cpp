#include "fracsig/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "fracsig/caputo.hpp"
#include "fracsig/classical.hpp"
#include "fracsig/discrete.hpp"
#include "fracsig/errors.hpp"
#include "fracsig/features.hpp"
#include "fracsig/fractional.hpp"
#include "fracsig/io.hpp"

namespace fracsig::cli {

namespace {

namespace fs = std::filesystem;

// Thrown for argument combinations CLI11 cannot express; maps to exit 1.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SigConfig {
    std::string kind = "classical";
    double alpha = 1.0;
    std::size_t level = 2;
    std::size_t grid = 0;
    std::string input;
    std::string output;
};

struct MnistConfig {
    std::string data_dir = "data/mnist";
    std::string train_images = "train-images-idx3-ubyte";
    std::string train_labels = "train-labels-idx1-ubyte";
    std::string test_images = "t10k-images-idx3-ubyte";
    std::string test_labels = "t10k-labels-idx1-ubyte";
    std::size_t train_limit = 0;
    std::size_t test_limit = 0;
    double alpha = 1.15;
    std::string sweep;
    std::size_t level = 4;
    std::size_t threads = std::max(1u, std::thread::hardware_concurrency());
    std::string out_dir = ".";
    bool allow_deep = false;
};

struct FdeConfig {
    std::size_t grid = 2048;
    std::uint64_t seed = caputo::BatteryOptions{}.seed;
};

// Reads key=value lines and splices them in as --key=value right after the
// subcommand, so flags given explicitly on the command line still win
// (CLI11 keeps the last occurrence of a single-valued option).
std::vector<std::string> expand_config(std::vector<std::string> args)
{
    auto it = std::find_if(args.begin(), args.end(),
                           [](const std::string& a) { return a == "--config" || a.rfind("--config=", 0) == 0; });
    if (it == args.end()) return args;
    std::string file;
    if (*it == "--config") {
        if (std::next(it) == args.end()) throw UsageError("--config needs a file");
        file = *std::next(it);
        it = args.erase(it, std::next(it, 2));
    } else {
        file = it->substr(9);
        it = args.erase(it);
    }
    std::ifstream in(file);
    if (!in) throw FormatError("cannot open config " + file);
    std::vector<std::string> injected;
    std::string line;
    while (std::getline(in, line)) {
        const auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw UsageError("config line without '=': " + line);
        auto trim = [](std::string s) {
            s.erase(0, s.find_first_not_of(" \t"));
            s.erase(s.find_last_not_of(" \t\r") + 1);
            return s;
        };
        auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        if (key.rfind("--", 0) == 0) key = key.substr(2);
        injected.push_back("--" + key + "=" + value);
    }
    const auto sub = std::find_if(args.begin(), args.end(), [](const std::string& a) { return a.rfind('-', 0) != 0; });
    const auto at = sub == args.end() ? args.end() : std::next(sub);
    args.insert(at, injected.begin(), injected.end());
    return args;
}

std::vector<double> parse_sweep(const std::string& text)
{
    if (text.empty()) return default_sweep();
    std::vector<double> out;
    for (auto field : io::split_csv_line(text)) {
        try {
            out.push_back(Alpha(io::parse_double(field)).value());
        } catch (const std::exception& e) {
            throw UsageError("--alpha-sweep: " + std::string(e.what()));
        }
    }
    return out;
}

int run_sig(const SigConfig& cfg, std::ostream& out)
{
    if (cfg.kind == "fractional" && cfg.grid == 0) throw UsageError("--kind fractional requires --grid");
    const auto path = cfg.input == "-" ? io::read_path_csv(std::cin) : io::read_path_csv(fs::path(cfg.input));
    const Alpha alpha(cfg.alpha);

    TruncatedSignature sig(path.dim(), cfg.level);
    if (cfg.kind == "classical") {
        sig = classical::signature(path, cfg.level);
    } else if (cfg.kind == "fractional") {
        sig = fractional::fractional_signature(path, alpha, cfg.level, cfg.grid);
    } else {
        sig = discrete::discrete_signature(path, alpha, cfg.level);
    }

    if (cfg.output.empty() || cfg.output == "-") {
        io::write_signature_csv(out, sig);
        return ok;
    }
    std::ofstream file(cfg.output, std::ios::binary);
    if (!file) throw FormatError("cannot write " + cfg.output);
    io::write_signature_csv(file, sig);
    if (!file.flush()) throw FormatError("write failed for " + cfg.output);
    return ok;
}

int run_mnist(const MnistConfig& cfg, bool sweep_requested, std::ostream& out)
{
    const std::vector<double> alphas = sweep_requested ? parse_sweep(cfg.sweep) : std::vector<double>{cfg.alpha};
    const fs::path dir(cfg.data_dir);
    auto limit = [](std::size_t n) { return n == 0 ? std::nullopt : std::optional<std::size_t>(n); };
    const auto train = features::load_idx(dir / cfg.train_images, dir / cfg.train_labels, limit(cfg.train_limit));
    const auto test = features::load_idx(dir / cfg.test_images, dir / cfg.test_labels, limit(cfg.test_limit));
    fs::create_directories(cfg.out_dir);

    const features::ExtractOptions opts{cfg.threads, cfg.allow_deep};
    for (double a : alphas) {
        const Alpha alpha(a);
        const auto raw_train = features::extract_features(train, alpha, cfg.level, opts);
        const auto raw_test = features::extract_features(test, alpha, cfg.level, opts);
        const auto z = features::standardize(raw_train, raw_test);
        const std::string tag = "a" + io::format_double(a) + "_L" + std::to_string(cfg.level);
        const fs::path train_file = fs::path(cfg.out_dir) / ("train_" + tag + ".csv");
        const fs::path test_file = fs::path(cfg.out_dir) / ("test_" + tag + ".csv");
        features::export_features(z.train, z.stats, train_file);
        features::export_features(z.test, z.stats, test_file);
        out << "alpha=" << io::format_double(a) << " level=" << cfg.level << " train=" << z.train.rows()
            << " test=" << z.test.rows() << " columns=" << z.train.columns() << " -> " << train_file.string() << ", "
            << test_file.string() << '\n';
    }
    return ok;
}

int run_verify(const FdeConfig& cfg, std::ostream& out)
{
    caputo::BatteryOptions opts;
    opts.grid_N = cfg.grid;
    opts.seed = cfg.seed;
    const auto rows = caputo::expansion_battery(opts);
    bool all_ok = true;
    out << "case,alpha,e,d,knots,iterate,max_rel_error,status\n";
    for (const auto& r : rows) {
        const bool pass = r.max_rel_error < caputo::battery_tolerance;
        all_ok = all_ok && pass;
        out << r.case_id << ',' << io::format_double(r.alpha) << ',' << r.state_dim << ',' << r.driver_dim << ','
            << r.knots << ',' << r.iterate << ',' << std::scientific << std::setprecision(3) << r.max_rel_error
            << std::defaultfloat << ',' << (pass ? "ok" : "FAIL") << '\n';
    }
    const double exp_err = caputo::scalar_exponential_error();
    const bool exp_ok = exp_err < caputo::exponential_tolerance;
    all_ok = all_ok && exp_ok;
    out << "scalar exp(1) at 20 iterates: abs error " << std::scientific << std::setprecision(3) << exp_err
        << std::defaultfloat << (exp_ok ? " ok" : " FAIL") << '\n';
    out << (all_ok ? "all rows below tolerance\n" : "tolerance exceeded\n");
    return all_ok ? ok : data_error;
}

}  // namespace

std::vector<double> default_sweep()
{
    std::vector<double> out;
    for (int hundredths = 80; hundredths <= 140; hundredths += 5) out.push_back(hundredths / 100.0);
    return out;
}

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Classical, fractional and discrete fractional signatures of piecewise-linear paths", "fracsig"};
    app.require_subcommand(1);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app.set_help_all_flag("--help-all", "Help for every subcommand");
    app.footer("A --config FILE of key=value lines (flag names without dashes) may precede the subcommand flags.");

    SigConfig sig;
    auto* sig_cmd = app.add_subcommand("sig", "Signature of a path CSV (one knot per row)");
    sig_cmd->add_option("--kind", sig.kind, "classical, fractional or discrete")
        ->check(CLI::IsMember({"classical", "fractional", "discrete"}))
        ->capture_default_str();
    sig_cmd->add_option("--alpha", sig.alpha, "Fractional order")->check(CLI::PositiveNumber)->capture_default_str();
    sig_cmd->add_option("--level", sig.level, "Truncation level")->check(CLI::Range(1, 16))->capture_default_str();
    sig_cmd->add_option("--grid", sig.grid, "Quadrature node spacings (fractional only)")
        ->check(CLI::PositiveNumber);
    sig_cmd->add_option("--input", sig.input, "Path CSV, '-' for stdin")->required();
    sig_cmd->add_option("--output", sig.output, "Signature CSV (default stdout)");

    MnistConfig mn;
    auto* mn_cmd = app.add_subcommand("mnist-features", "IDX digits -> standardized discrete-signature features");
    mn_cmd->add_option("--data-dir", mn.data_dir, "Directory holding the IDX files")
        ->envname(mnist_dir_env)
        ->capture_default_str();
    mn_cmd->add_option("--train-images", mn.train_images)->capture_default_str();
    mn_cmd->add_option("--train-labels", mn.train_labels)->capture_default_str();
    mn_cmd->add_option("--test-images", mn.test_images)->capture_default_str();
    mn_cmd->add_option("--test-labels", mn.test_labels)->capture_default_str();
    mn_cmd->add_option("--train-limit", mn.train_limit, "Keep the first N training digits (0 = all)");
    mn_cmd->add_option("--test-limit", mn.test_limit, "Keep the first N test digits (0 = all)");
    mn_cmd->add_option("--alpha", mn.alpha, "Fractional order")->check(CLI::PositiveNumber)->capture_default_str();
    auto* sweep_opt = mn_cmd->add_option("--alpha-sweep", mn.sweep,
                                         "Comma-separated alphas, one feature file pair each "
                                         "(no value: 0.80..1.40 step 0.05)")
                          ->expected(0, 1);
    mn_cmd->add_option("--level", mn.level, "Truncation level")->check(CLI::Range(1, 16))->capture_default_str();
    mn_cmd->add_option("--threads", mn.threads, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
    mn_cmd->add_option("--out-dir", mn.out_dir, "Output directory")->capture_default_str();
    mn_cmd->add_flag("--allow-deep", mn.allow_deep, "Permit levels above 7");

    FdeConfig fde;
    auto* fde_cmd = app.add_subcommand("verify-fde", "Picard iterates vs signature expansion on the test battery");
    fde_cmd->add_option("--grid", fde.grid, "Quadrature node spacings target")->check(CLI::Range(8, 1 << 16))
        ->capture_default_str();
    fde_cmd->add_option("--seed", fde.seed, "Battery seed")->capture_default_str();

    try {
        auto args = expand_config(raw_args);
        std::reverse(args.begin(), args.end());
        app.parse(args);
        if (*sig_cmd) return run_sig(sig, out);
        if (*mn_cmd) return run_mnist(mn, sweep_opt->count() > 0, out);
        return run_verify(fde, out);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            app.exit(e, out, err);
            return ok;
        }
        err << "error: " << e.what() << "\n\n" << app.help();
        return usage_error;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return usage_error;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return data_error;
    }
}

}  // namespace fracsig::cli
