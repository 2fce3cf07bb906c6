// pottsrec: joint reconstruction and segmentation with Potts regularization.
//
// Subcommands: phantom, forward, fbp, reconstruct, potts1d, nbhd, tikhonov,
// metrics. Flags override values read from --config (INI/TOML-style file).

#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pottsrec/admm.hpp"
#include "pottsrec/io.hpp"
#include "pottsrec/metrics.hpp"
#include "pottsrec/neighborhood.hpp"
#include "pottsrec/operators.hpp"
#include "pottsrec/phantoms.hpp"
#include "pottsrec/potts1d.hpp"
#include "pottsrec/tikhonov.hpp"

using json = nlohmann::json;
using namespace pottsrec;

namespace {

constexpr const char* kVersion = "pottsrec 1.0.0";

struct OperatorSpec {
    std::string kind = "radon";  // radon | spherical | blur-gaussian | blur-motion | identity
    int size = 128;
    int channels = 1;
    int angles = 15;
    int detectors = 0;  // 0 => ceil(sqrt(2) * size), harmonized with RadonGeometry::uniform
    int radii = 256;
    double sigma = 1.5;
    int length = 15;

    void add_flags(CLI::App* cmd) {
        cmd->add_option("--op", kind, "operator: radon|spherical|blur-gaussian|blur-motion|identity")
            ->check(CLI::IsMember(
                {"radon", "spherical", "blur-gaussian", "blur-motion", "identity"}));
        cmd->add_option("--size", size, "image side length")->check(CLI::PositiveNumber);
        cmd->add_option("--channels", channels, "image channels")->check(CLI::PositiveNumber);
        cmd->add_option("--angles", angles, "projection angles")->check(CLI::PositiveNumber);
        cmd->add_option("--detectors", detectors, "detector count (0 = automatic)");
        cmd->add_option("--radii", radii, "spherical radii count")->check(CLI::PositiveNumber);
        cmd->add_option("--sigma", sigma, "gaussian blur sigma")->check(CLI::PositiveNumber);
        cmd->add_option("--length", length, "motion blur length in pixels")
            ->check(CLI::PositiveNumber);
    }

    std::unique_ptr<ForwardOperator> build() const {
        int det = detectors > 0 ? detectors
                                : static_cast<int>(std::ceil(std::sqrt(2.0) * size)) | 1;
        if (kind == "radon")
            return std::make_unique<RadonOperator>(RadonGeometry::uniform(angles, det), size);
        if (kind == "spherical")
            return std::make_unique<SphericalOperator>(SphericalGeometry::uniform(angles, radii),
                                                       size);
        if (kind == "blur-gaussian")
            return std::make_unique<ConvolutionOperator>(ConvolutionKernel::gaussian(sigma), size,
                                                         size, channels);
        if (kind == "blur-motion")
            return std::make_unique<ConvolutionOperator>(ConvolutionKernel::motion_horizontal(length),
                                                         size, size, channels);
        return std::make_unique<IdentityOperator>(size, size, channels);
    }

    json to_json() const {
        return json{{"kind", kind},       {"size", size},   {"channels", channels},
                    {"angles", angles},   {"detectors", detectors}, {"radii", radii},
                    {"sigma", sigma},     {"length", length}};
    }
};

void write_json(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw CLI::RuntimeError("cannot open " + path + " for writing", 1);
    out << j.dump(2) << "\n";
}

std::string config_hash(const json& j) {
    // stable FNV-1a over the canonical dump; enough to tie artifacts to a run
    uint64_t h = 1469598103934665603ull;
    for (char c : j.dump()) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ull;
    }
    std::ostringstream os;
    os << std::hex << h;
    return os.str();
}

Image labels_as_image(const LabelMap& lm) {
    Image img(lm.width, lm.height, 1);
    for (size_t i = 0; i < lm.labels.size(); ++i) img.data[i] = lm.labels[i];
    return img;
}

// ---------------------------------------------------------------------------

struct PhantomArgs {
    std::string kind = "shepp-logan";
    int size = 128;
    std::string out;
    std::string labels_out;
    std::string png;
};

int cmd_phantom(const PhantomArgs& a) {
    Phantom ph;
    if (a.kind == "shepp-logan")
        ph = shepp_logan(a.size, true);
    else if (a.kind == "shepp-logan-standard")
        ph = shepp_logan(a.size, false);
    else
        ph = geometric_shapes(a.size);
    write_image_csv(a.out, ph.image);
    if (!a.labels_out.empty()) write_labels_csv(a.labels_out, ph.ground_truth);
    if (!a.png.empty()) write_png(a.png, ph.image);
    json prov{{"command", "phantom"}, {"kind", a.kind}, {"size", a.size}, {"version", kVersion}};
    prov["config_hash"] = config_hash(prov);
    write_json(a.out + ".provenance.json", prov);
    return 0;
}

struct ForwardArgs {
    OperatorSpec op;
    std::string in;
    std::string out;
    std::string geometry;
    double noise = 0.0;
    uint64_t seed = 0;
};

void write_geometry_for(const std::string& path, const OperatorSpec& spec,
                        const ForwardOperator& A) {
    if (spec.kind == "radon")
        write_radon_geometry(path, static_cast<const RadonOperator&>(A).geometry(), spec.size);
    else if (spec.kind == "spherical")
        write_spherical_geometry(path, static_cast<const SphericalOperator&>(A).geometry(),
                                 spec.size);
    else {
        json j{{"kind", spec.kind}, {"size", spec.size}, {"channels", spec.channels},
               {"sigma", spec.sigma}, {"length", spec.length}};
        write_json(path, j);
    }
}

int cmd_forward(const ForwardArgs& a) {
    Image u = read_image_csv(a.in);
    OperatorSpec spec = a.op;
    spec.size = u.width;
    spec.channels = u.channels;
    if (u.width != u.height) throw CLI::RuntimeError("forward expects a square image", 1);
    auto A = spec.build();
    DataVolume f = A->apply(u);
    f = add_noise(f, a.noise, a.seed);
    write_volume_csv(a.out, f);
    if (!a.geometry.empty()) write_geometry_for(a.geometry, spec, *A);
    json prov{{"command", "forward"}, {"operator", spec.to_json()}, {"noise", a.noise},
              {"seed", a.seed},       {"input", a.in},            {"version", kVersion}};
    prov["config_hash"] = config_hash(prov);
    write_json(a.out + ".provenance.json", prov);
    return 0;
}

struct FbpArgs {
    std::string in;
    std::string geometry;
    std::string out;
    std::string png;
};

int cmd_fbp(const FbpArgs& a) {
    DataVolume f = read_volume_csv(a.in);
    int n = 0;
    RadonGeometry g = read_radon_geometry(a.geometry, &n);
    RadonOperator A(g, n);
    Image v = fbp_ram_lak(f, A);
    write_image_csv(a.out, v);
    if (!a.png.empty()) write_png(a.png, v);
    json prov{{"command", "fbp"}, {"input", a.in}, {"geometry", a.geometry},
              {"version", kVersion}};
    prov["config_hash"] = config_hash(prov);
    write_json(a.out + ".provenance.json", prov);
    return 0;
}

struct ReconstructArgs {
    OperatorSpec op;
    std::string in;
    std::string geometry;
    std::string out_prefix = "recon";
    std::string solver = "cg";
    double gamma = 0.1;
    int level = 1;
    double mu0 = 1e-7;
    double tau = 2.01;
    std::string nu_mode = "zero";
    double stop = 1e-3;
    int max_iter = 250;
    double cg_tol = 1e-6;
    int cg_max_iter = 500;
    std::optional<double> merge_tol;
    bool normalize = true;
};

int cmd_reconstruct(const ReconstructArgs& a) {
    auto t0 = std::chrono::steady_clock::now();
    DataVolume f = read_volume_csv(a.in);
    OperatorSpec spec = a.op;
    std::unique_ptr<ForwardOperator> A;
    if (!a.geometry.empty()) {
        if (spec.kind == "radon") {
            int n = 0;
            RadonGeometry g = read_radon_geometry(a.geometry, &n);
            spec.size = n;
            A = std::make_unique<RadonOperator>(g, n);
        } else if (spec.kind == "spherical") {
            int n = 0;
            SphericalGeometry g = read_spherical_geometry(a.geometry, &n);
            spec.size = n;
            A = std::make_unique<SphericalOperator>(g, n);
        } else {
            throw CLI::RuntimeError("--geometry applies to radon/spherical operators", 1);
        }
    } else {
        if (f.tag == GeometryTag::image) {
            spec.size = f.cols;
            spec.channels = f.channels;
        }
        A = spec.build();
    }

    // Mean-squared data term: scale operator and data by 1/sqrt(#measurements)
    // and gamma by its square, so the default coupling schedule behaves the
    // same regardless of measurement count. The minimizer is unchanged.
    double c = a.normalize ? mean_square_scale(f) : 1.0;
    ScaledOperator As(*A, c);
    DataVolume fs = f;
    for (double& v : fs.data) v *= c;

    PottsConfig cfg;
    cfg.gamma = a.gamma * c * c;
    cfg.neighborhood = build_system(a.level);
    cfg.stop_tolerance = a.stop;
    cfg.max_iterations = a.max_iter;
    cfg.cg.tolerance = a.cg_tol;
    cfg.cg.max_iterations = a.cg_max_iter;
    cfg.merge_tolerance = a.merge_tol;
    CouplingSchedule sched;
    sched.mu0 = a.mu0;
    sched.tau = a.tau;
    sched.nu_mode = a.nu_mode == "mu-over-s" ? CouplingSchedule::NuMode::mu_over_s
                                             : CouplingSchedule::NuMode::zero;

    ProxFn prox;  // default: CG on the normal equation
    if (a.solver == "frequency") {
        auto* conv = dynamic_cast<const ConvolutionOperator*>(A.get());
        if (!conv) throw CLI::RuntimeError("frequency solver requires a blur operator", 1);
        // the exact frequency prox absorbs the scale into an equivalent
        // problem: minimize ||cKv - cf||^2 + (w/2)||v - z||^2
        ConvolutionKernel k = conv->kernel();
        for (double& t : k.taps) t *= c;
        DataVolume fk = fs;
        prox = make_deconv_prox(k, fk);
    } else if (a.solver == "radon-filter") {
        auto* rad = dynamic_cast<const RadonOperator*>(A.get());
        if (!rad) throw CLI::RuntimeError("radon-filter solver requires a radon operator", 1);
        if (a.normalize)
            throw CLI::RuntimeError("radon-filter solver uses the unscaled data term; "
                                    "pass --no-normalize", 1);
        prox = make_radon_filtered_prox(*rad, f);
    }

    AdmmResult res = run(As, fs, cfg, sched, prox);
    auto t1 = std::chrono::steady_clock::now();
    double wall = std::chrono::duration<double>(t1 - t0).count();

    write_image_csv(a.out_prefix + ".csv", res.v);
    write_png(a.out_prefix + ".png", res.v);
    write_labels_csv(a.out_prefix + ".labels.csv", res.labels);
    write_label_png(a.out_prefix + ".labels.png", res.labels);

    std::ofstream diag(a.out_prefix + ".diagnostics.jsonl");
    for (const auto& rec : res.diagnostics.history) {
        json j{{"k", rec.k},
               {"mu", rec.mu},
               {"nu", rec.nu},
               {"split_residuals", rec.split_residuals},
               {"stop_value", rec.stop_value},
               {"multiplier_norm", rec.multiplier_norm},
               {"data_residual", rec.data_residual},
               {"objective", rec.objective}};
        diag << j.dump() << "\n";
    }

    json cfgj{{"operator", spec.to_json()},
              {"solver", a.solver},
              {"gamma", a.gamma},
              {"level", a.level},
              {"mu0", a.mu0},
              {"tau", a.tau},
              {"nu_mode", a.nu_mode},
              {"stop_tolerance", a.stop},
              {"max_iterations", a.max_iter},
              {"cg_tolerance", a.cg_tol},
              {"normalize", a.normalize},
              {"input", a.in}};
    json summary{{"command", "reconstruct"},
                 {"config", cfgj},
                 {"iterations", res.diagnostics.iterations},
                 {"converged", res.diagnostics.converged},
                 {"aborted", res.diagnostics.aborted},
                 {"abort_reason", res.diagnostics.abort_reason},
                 {"label_count", res.labels.label_count},
                 {"final_stop_value", res.diagnostics.history.empty()
                                          ? 0.0
                                          : res.diagnostics.history.back().stop_value},
                 {"final_data_residual", res.diagnostics.history.empty()
                                             ? 0.0
                                             : res.diagnostics.history.back().data_residual},
                 {"wall_time_seconds", wall},
                 {"version", kVersion}};
    summary["config_hash"] = config_hash(cfgj);
    write_json(a.out_prefix + ".summary.json", summary);
    std::cout << summary.dump(2) << "\n";
    if (res.diagnostics.aborted) return 2;
    return 0;
}

struct Potts1dArgs {
    std::string in;
    std::string out;
    double gamma = 0.1;
};

int cmd_potts1d(const Potts1dArgs& a) {
    std::ifstream is(a.in);
    if (!is) throw CLI::RuntimeError("cannot open " + a.in, 1);
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
        if (!rows.empty() && row.size() != rows[0].size())
            throw CLI::RuntimeError("ragged CSV input", 1);
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw CLI::RuntimeError("empty input signal", 1);
    Signal1D sig(static_cast<int>(rows.size()), static_cast<int>(rows[0].size()));
    for (int i = 0; i < sig.length; ++i)
        for (int ch = 0; ch < sig.channels; ++ch) sig.at(i, ch) = rows[i][ch];

    PottsSolution1D sol = solve_potts_1d(sig, a.gamma);
    std::ofstream os(a.out);
    os.precision(17);
    int start = 0;
    for (size_t s = 0; s < sol.segment_values.size(); ++s) {
        int end = s < sol.jump_positions.size() ? sol.jump_positions[s] - 1 : sig.length - 1;
        os << start << "," << end;
        for (double v : sol.segment_values[s]) os << "," << v;
        os << "\n";
        start = end + 1;
    }
    std::cerr << "segments=" << sol.segment_values.size() << " energy=" << sol.energy << "\n";
    return 0;
}

int cmd_nbhd(int level) {
    NeighborhoodSystem s = build_system(level);
    json disp = json::array(), w = json::array();
    for (auto& p : s.displacements) disp.push_back({p[0], p[1]});
    for (double x : s.weights) w.push_back(x);
    json j{{"level", level},
           {"displacements", disp},
           {"weights", w},
           {"isotropy_ratio", isotropy_ratio(s, 3600)}};
    std::cout << j.dump(2) << "\n";
    return 0;
}

struct TikhonovArgs {
    OperatorSpec op;
    std::string in;
    std::string geometry;
    std::string out;
    std::string solver = "cg";
    double weight = 1.0;
    double alpha = 1.0;
    double cg_tol = 1e-6;
    int cg_max_iter = 500;
};

int cmd_tikhonov(const TikhonovArgs& a) {
    DataVolume f = read_volume_csv(a.in);
    OperatorSpec spec = a.op;
    std::unique_ptr<ForwardOperator> A;
    if (!a.geometry.empty() && spec.kind == "radon") {
        int n = 0;
        RadonGeometry g = read_radon_geometry(a.geometry, &n);
        spec.size = n;
        A = std::make_unique<RadonOperator>(g, n);
    } else {
        if (f.tag == GeometryTag::image) {
            spec.size = f.cols;
            spec.channels = f.channels;
        }
        A = spec.build();
    }
    Image z(A->image_width(), A->image_height(), A->image_channels());
    Image v;
    if (a.solver == "frequency") {
        auto* conv = dynamic_cast<const ConvolutionOperator*>(A.get());
        if (!conv) throw CLI::RuntimeError("frequency solver requires a blur operator", 1);
        v = solve_deconv_frequency(conv->kernel(), f, z, a.weight);
    } else if (a.solver == "radon-filter") {
        auto* rad = dynamic_cast<const RadonOperator*>(A.get());
        if (!rad) throw CLI::RuntimeError("radon-filter solver requires a radon operator", 1);
        v = solve_radon_filtered(f, z, a.alpha, *rad);
    } else {
        CgConfig cg;
        cg.tolerance = a.cg_tol;
        cg.max_iterations = a.cg_max_iter;
        CgResult r = solve_cg(*A, f, z, a.weight, cg);
        std::cerr << "cg iterations=" << r.iterations
                  << " relative_residual=" << r.relative_residual << "\n";
        v = r.v;
    }
    write_image_csv(a.out, v);
    return 0;
}

struct MetricsArgs {
    std::string image;
    std::string reference;
    std::string labels;
    std::string ref_labels;
};

int cmd_metrics(const MetricsArgs& a) {
    json j{{"command", "metrics"}};
    if (!a.image.empty()) {
        Image u = read_image_csv(a.image);
        Image g = read_image_csv(a.reference);
        j["psnr"] = psnr(u, g);
        double gn = norm2(g);
        j["relative_error"] = gn > 0 ? dist2(u, g) / gn : dist2(u, g);
    }
    if (!a.labels.empty()) {
        LabelMap p = read_labels_csv(a.labels);
        LabelMap q = read_labels_csv(a.ref_labels);
        j["rand_index"] = rand_index(p.labels, q.labels);
        j["label_count"] = p.label_count;
    }
    std::cout << j.dump(2) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Joint image reconstruction and segmentation with Potts regularization"};
    app.set_version_flag("--version", kVersion);
    app.set_config("--config", "", "INI/TOML-style config file; flags override");
    app.require_subcommand(1);

    PhantomArgs ph;
    auto* cph = app.add_subcommand("phantom", "generate a test image with ground-truth labels");
    cph->add_option("--kind", ph.kind)
        ->check(CLI::IsMember({"shepp-logan", "shepp-logan-standard", "shapes"}));
    cph->add_option("--size", ph.size)->check(CLI::PositiveNumber);
    cph->add_option("--out", ph.out)->required();
    cph->add_option("--labels-out", ph.labels_out);
    cph->add_option("--png", ph.png);

    ForwardArgs fw;
    auto* cfw = app.add_subcommand("forward", "apply an operator to an image, optionally add noise");
    fw.op.add_flags(cfw);
    cfw->add_option("--in", fw.in)->required()->check(CLI::ExistingFile);
    cfw->add_option("--out", fw.out)->required();
    cfw->add_option("--geometry", fw.geometry, "write geometry sidecar here");
    cfw->add_option("--noise", fw.noise)->check(CLI::NonNegativeNumber);
    cfw->add_option("--seed", fw.seed);

    FbpArgs fb;
    auto* cfb = app.add_subcommand("fbp", "filtered backprojection baseline (Ram-Lak)");
    cfb->add_option("--in", fb.in)->required()->check(CLI::ExistingFile);
    cfb->add_option("--geometry", fb.geometry)->required()->check(CLI::ExistingFile);
    cfb->add_option("--out", fb.out)->required();
    cfb->add_option("--png", fb.png);

    ReconstructArgs rc;
    auto* crc = app.add_subcommand("reconstruct", "joint reconstruction and segmentation");
    rc.op.add_flags(crc);
    crc->add_option("--in", rc.in)->required()->check(CLI::ExistingFile);
    crc->add_option("--geometry", rc.geometry)->check(CLI::ExistingFile);
    crc->add_option("--out-prefix", rc.out_prefix);
    crc->add_option("--solver", rc.solver)
        ->check(CLI::IsMember({"cg", "frequency", "radon-filter"}));
    crc->add_option("--gamma", rc.gamma)->check(CLI::PositiveNumber);
    crc->add_option("--level", rc.level)->check(CLI::Range(0, 2));
    crc->add_option("--mu0", rc.mu0)->check(CLI::PositiveNumber);
    crc->add_option("--tau", rc.tau)->check(CLI::PositiveNumber);
    crc->add_option("--nu", rc.nu_mode)->check(CLI::IsMember({"zero", "mu-over-s"}));
    crc->add_option("--stop", rc.stop)->check(CLI::PositiveNumber);
    crc->add_option("--max-iter", rc.max_iter)->check(CLI::PositiveNumber);
    crc->add_option("--cg-tol", rc.cg_tol)->check(CLI::PositiveNumber);
    crc->add_option("--cg-max-iter", rc.cg_max_iter)->check(CLI::PositiveNumber);
    double merge_tol_flag = -1.0;
    crc->add_option("--merge-tol", merge_tol_flag,
                    "label merge tolerance (default: 1e-6 * value range)");
    crc->add_flag("!--no-normalize", rc.normalize,
                  "disable mean-squared scaling of the data term");

    Potts1dArgs p1;
    auto* cp1 = app.add_subcommand("potts1d", "exact 1D Potts segmentation of a CSV signal");
    cp1->add_option("--in", p1.in)->required()->check(CLI::ExistingFile);
    cp1->add_option("--out", p1.out)->required();
    cp1->add_option("--gamma", p1.gamma)->check(CLI::PositiveNumber);

    int nb_level = 1;
    auto* cnb = app.add_subcommand("nbhd", "print a neighborhood system as JSON");
    cnb->add_option("--level", nb_level)->check(CLI::Range(0, 2));

    TikhonovArgs tk;
    auto* ctk = app.add_subcommand("tikhonov", "standalone Tikhonov solve");
    tk.op.add_flags(ctk);
    ctk->add_option("--in", tk.in)->required()->check(CLI::ExistingFile);
    ctk->add_option("--geometry", tk.geometry)->check(CLI::ExistingFile);
    ctk->add_option("--out", tk.out)->required();
    ctk->add_option("--solver", tk.solver)
        ->check(CLI::IsMember({"cg", "frequency", "radon-filter"}));
    ctk->add_option("--weight", tk.weight)->check(CLI::NonNegativeNumber);
    ctk->add_option("--alpha", tk.alpha)->check(CLI::PositiveNumber);
    ctk->add_option("--cg-tol", tk.cg_tol)->check(CLI::PositiveNumber);
    ctk->add_option("--cg-max-iter", tk.cg_max_iter)->check(CLI::PositiveNumber);

    MetricsArgs mt;
    auto* cmt = app.add_subcommand("metrics", "PSNR / relative error / Rand index as JSON");
    cmt->add_option("--image", mt.image)->check(CLI::ExistingFile);
    cmt->add_option("--reference", mt.reference)->check(CLI::ExistingFile);
    cmt->add_option("--labels", mt.labels)->check(CLI::ExistingFile);
    cmt->add_option("--ref-labels", mt.ref_labels)->check(CLI::ExistingFile);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*cph) return cmd_phantom(ph);
        if (*cfw) return cmd_forward(fw);
        if (*cfb) return cmd_fbp(fb);
        if (*crc) {
            if (merge_tol_flag >= 0.0) rc.merge_tol = merge_tol_flag;
            return cmd_reconstruct(rc);
        }
        if (*cp1) return cmd_potts1d(p1);
        if (*cnb) return cmd_nbhd(nb_level);
        if (*ctk) return cmd_tikhonov(tk);
        if (*cmt) {
            if (mt.image.empty() == mt.reference.empty() &&
                (mt.image.empty() || !mt.reference.empty())) {
                // ok: both set or both empty
            } else {
                throw CLI::RuntimeError("--image and --reference must be given together", 1);
            }
            if (mt.labels.empty() != mt.ref_labels.empty())
                throw CLI::RuntimeError("--labels and --ref-labels must be given together", 1);
            return cmd_metrics(mt);
        }
    } catch (const CLI::RuntimeError& e) {
        std::cerr << "error: exit " << e.get_exit_code() << "\n";
        return e.get_exit_code();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
