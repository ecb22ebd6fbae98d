#include "dir/cli.hpp"

#include "dir/detect.hpp"
#include "dir/fft.hpp"
#include "dir/forensics.hpp"
#include "dir/image_io.hpp"
#include "dir/imgops.hpp"
#include "dir/match.hpp"
#include "dir/metrics.hpp"
#include "dir/serialize.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

namespace dir::cli {

namespace {

struct UsageExit {
  int code;
};

OrderNorm parse_norm(const std::string& name) {
  if (name == "l1" || name == "1") return OrderNorm::L1;
  if (name == "inf" || name == "linf") return OrderNorm::LInf;
  throw std::invalid_argument("unknown norm: " + name + " (expected l1 or inf)");
}

IntegrationStrategy parse_strategy(const std::string& name) {
  if (name == "zoa") return IntegrationStrategy::zoa();
  if (name.rfind("up", 0) == 0) return IntegrationStrategy::upsample(std::stoi(name.substr(2)));
  throw std::invalid_argument("unknown strategy: " + name + " (expected zoa or up<L>)");
}

PoolMode parse_pool(const std::string& name) {
  if (name == "avg" || name == "average") return PoolMode::Average;
  if (name == "max") return PoolMode::Max;
  throw std::invalid_argument("unknown pooling mode: " + name);
}

void emit_csv(const std::string& out_path, const std::string& content) {
  std::cout << content;
  if (!out_path.empty()) {
    std::ofstream out(out_path);
    if (!out) throw IoError("cannot write file: " + out_path);
    out << content;
  }
}

// Shared basis/order/scale options for feature-producing subcommands.
struct FeatureOpts {
  std::string basis = "pct";
  std::string norm = "inf";
  int bound = 3;
  std::vector<int> scales = {8};
  std::string strategy = "zoa";
  std::string pool = "avg";

  void attach(CLI::App* app) {
    app->add_option("--basis", basis, "radial basis (pct,pcet,pst,zm,ofmm,efm,rhfm)");
    app->add_option("--norm", norm, "order-set norm (l1 or inf)");
    app->add_option("--K", bound, "order-set bound");
    app->add_option("--scales", scales, "scale list (pixels)")->delimiter(',');
    app->add_option("--strategy", strategy, "integration strategy (zoa or up<L>)");
    app->add_option("--pool", pool, "scale pooling (avg or max)");
  }
  BasisKind kind() const { return basis_from_name(basis); }
  OrderSet orders() const { return order_set(kind(), parse_norm(norm), bound); }
  IntegrationStrategy integ() const { return parse_strategy(strategy); }
  PoolMode pooling() const { return parse_pool(pool); }
};

FeatureField pooled_field(const GrayImage& image, const FeatureOpts& opts, int threads) {
  const MomentField field = decompose(image, opts.kind(), opts.orders(), opts.scales,
                                      opts.integ(), DensePath::Fft, nullptr, threads);
  const auto per_scale = magnitude_features_all(field, opts.orders(), opts.scales);
  return per_scale.size() == 1 ? per_scale.front() : pool_scales(per_scale, opts.pooling());
}

int cmd_selftest();

} // namespace

int run(const std::vector<std::string>& args) {
  std::vector<std::string> argv_store;
  argv_store.emplace_back("dir");
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& s : argv_store) argv.push_back(s.c_str());
  return run(static_cast<int>(argv.size()), argv.data());
}

int run(int argc, const char* const* argv) {
  CLI::App app{"dense invariant representation toolkit"};
  app.require_subcommand(1);
  app.set_config("--config", "", "TOML-style config file; command-line flags take precedence");
  int threads = 1;
  app.add_option("--threads", threads, "max worker threads for channel decomposition");

  int exit_code = 0;
  auto fail_usage = [&](const std::string& msg) {
    std::cerr << "error: " << msg << "\n";
    throw UsageExit{1};
  };

  // ---- kernels ------------------------------------------------------------
  auto* kernels = app.add_subcommand("kernels", "build or inspect a kernel-spectrum bank");
  auto* kbuild = kernels->add_subcommand("build", "precompute kernel spectra");
  FeatureOpts kopts;
  kopts.attach(kbuild);
  int k_m0 = 0, k_n0 = 0;
  bool k_rescale = false;
  std::string k_out;
  kbuild->add_option("--M0", k_m0, "padded spectrum width")->required();
  kbuild->add_option("--N0", k_n0, "padded spectrum height")->required();
  kbuild->add_flag("--rescale", k_rescale, "derive larger scales via the scaling theorem");
  kbuild->add_option("--out", k_out, "output *.dirb path")->required();
  kbuild->callback([&]() {
    const KernelBank bank = bank_build(kopts.kind(), kopts.orders(), kopts.scales, k_m0, k_n0,
                                       kopts.integ(), k_rescale, threads);
    bank_save(k_out, bank);
    std::cout << "bank: " << bank.entry_count() << " spectra at " << bank.spec_cols << "x"
              << bank.spec_rows << " -> " << k_out << "\n";
  });
  auto* kinspect = kernels->add_subcommand("inspect", "list bank contents");
  std::string k_in;
  kinspect->add_option("bank", k_in, "*.dirb path")->required();
  kinspect->callback([&]() {
    const KernelBank bank = bank_load(k_in);
    std::cout << "basis=" << basis_name(bank.kind) << " strategy=" << bank.strategy.name()
              << " size=" << bank.spec_cols << "x" << bank.spec_rows
              << " entries=" << bank.entry_count() << "\n";
    for (const OrderPair& p : bank.orders) {
      for (int w : bank.scales) {
        const CMat* spec = bank.find(p.n, p.m, w);
        std::cout << "  n=" << p.n << " m=" << p.m << " w=" << w << " dc=" << (*spec)(0, 0)
                  << "\n";
      }
    }
  });

  // ---- decompose ----------------------------------------------------------
  auto* dec = app.add_subcommand("decompose", "image -> dense moment field (*.dirf)");
  FeatureOpts dopts;
  dopts.attach(dec);
  std::string d_image, d_out, d_bank, d_path = "fft";
  dec->add_option("image", d_image, "input image (PGM/PNG)")->required();
  dec->add_option("--path", d_path, "dense path (fft or spatial)");
  dec->add_option("--bank", d_bank, "optional precomputed *.dirb bank");
  dec->add_option("--out", d_out, "output *.dirf path")->required();
  dec->callback([&]() {
    const GrayImage image = load_image(d_image);
    KernelBank bank;
    const KernelBank* bank_ptr = nullptr;
    if (!d_bank.empty()) {
      bank = bank_load(d_bank);
      bank_ptr = &bank;
    }
    DensePath path;
    if (d_path == "fft") {
      path = DensePath::Fft;
    } else if (d_path == "spatial") {
      path = DensePath::Spatial;
    } else {
      fail_usage("unknown path: " + d_path);
      return;
    }
    const MomentField field =
        decompose(image, dopts.kind(), dopts.orders(), dopts.scales, dopts.integ(), path,
                  bank_ptr, threads);
    field_save(d_out, field);
    std::cout << "field: " << field.keys.size() << " channels of " << field.width << "x"
              << field.height << " -> " << d_out << "\n";
  });

  // ---- ce -----------------------------------------------------------------
  auto* ce = app.add_subcommand("ce", "calculation-error report (CSV)");
  std::string ce_basis = "pct", ce_strategy = "zoa", ce_out;
  int ce_k = 20, ce_w = 8;
  ce->add_option("--basis", ce_basis);
  ce->add_option("--strategy", ce_strategy);
  ce->add_option("--K", ce_k);
  ce->add_option("--w", ce_w);
  ce->add_option("--out", ce_out, "also write the CSV here");
  ce->callback([&]() {
    const CEReport report = calculation_error(basis_from_name(ce_basis),
                                              parse_strategy(ce_strategy), ce_k, ce_w);
    std::ostringstream csv;
    csv << "kind,strategy,K,w,ce\n"
        << basis_name(report.kind) << "," << report.strategy.name() << "," << report.bound << ","
        << report.w << "," << report.ce << "\n";
    emit_csv(ce_out, csv.str());
  });

  // ---- bench --------------------------------------------------------------
  auto* bench = app.add_subcommand("bench", "decomposition-time report (CSV, single thread)");
  int b_size = 512, b_n = 1, b_m = 1, b_reps = 5;
  uint64_t b_seed = 20220901ULL;
  std::vector<int> b_scales;
  std::vector<std::string> b_paths = {"spatial", "fft", "fft_bank"};
  std::string b_out;
  bench->add_option("--size", b_size, "square image size");
  bench->add_option("--n", b_n);
  bench->add_option("--m", b_m);
  bench->add_option("--scales", b_scales, "ascending scale list")->required()->delimiter(',');
  bench->add_option("--paths", b_paths, "paths: spatial,fft,fft_bank")->delimiter(',');
  bench->add_option("--reps", b_reps, "timed repetitions (median reported)");
  bench->add_option("--seed", b_seed);
  bench->add_option("--out", b_out);
  bench->callback([&]() {
    std::vector<BenchPath> paths;
    for (const std::string& p : b_paths) {
      if (p == "spatial") {
        paths.push_back(BenchPath::Spatial);
      } else if (p == "fft") {
        paths.push_back(BenchPath::Fft);
      } else if (p == "fft_bank") {
        paths.push_back(BenchPath::FftBank);
      } else {
        fail_usage("unknown bench path: " + p);
      }
    }
    const auto reports = decomposition_benchmark(b_size, BasisKind::PCT, {b_n, b_m}, b_scales,
                                                 paths, b_reps, b_seed);
    std::ostringstream csv;
    csv << "path,w,seconds\n";
    for (const DTReport& r : reports) {
      csv << bench_path_name(r.path) << "," << r.w << "," << r.seconds << "\n";
    }
    emit_csv(b_out, csv.str());
  });

  // ---- detect ---------------------------------------------------------------
  auto* det = app.add_subcommand("detect", "template detection over a dense feature field");
  FeatureOpts topts;
  topts.norm = "inf";
  topts.bound = 5;
  topts.scales = {12, 16};
  topts.attach(det);
  std::string t_template, t_scene, t_out, t_map_out;
  double t_threshold = 0.0, t_nms = 12.0;
  det->add_option("--template", t_template)->required();
  det->add_option("--scene", t_scene)->required();
  det->add_option("--threshold", t_threshold, "distance threshold (> 0)")->required();
  det->add_option("--nms", t_nms, "non-maximum suppression radius (pixels)");
  det->add_option("--out", t_out, "detections CSV");
  det->add_option("--map-out", t_map_out, "write the min-distance map as 16-bit PGM");
  det->callback([&]() {
    const GrayImage tmpl = load_image(t_template);
    const GrayImage scene = load_image(t_scene);
    const OrderSet orders = topts.orders();
    const auto signatures =
        template_signature(tmpl, topts.kind(), orders, topts.scales, topts.integ());
    const MomentField field = decompose(scene, topts.kind(), orders, topts.scales, topts.integ(),
                                        DensePath::Fft, nullptr, threads);
    const auto fields = magnitude_features_all(field, orders, topts.scales);
    const ScoredMaps maps = best_distance(fields, signatures);
    const DetectionResult result = detect_peaks(maps, t_threshold, t_nms);
    std::ostringstream csv;
    csv << "u,v,w,score\n";
    for (const Detection& d : result.detections) {
      csv << d.u << "," << d.v << "," << d.w << "," << d.score << "\n";
    }
    emit_csv(t_out, csv.str());
    if (!t_map_out.empty()) save_pgm16(t_map_out, maps.dist);
  });

  // ---- match ----------------------------------------------------------------
  auto* mat = app.add_subcommand("match", "dense correspondence between two images");
  FeatureOpts mopts;
  mopts.norm = "l1";
  mopts.scales = {8, 11, 13, 16, 19, 21, 24, 27, 29, 32};
  mopts.attach(mat);
  std::string m_a, m_b, m_out, m_len_out;
  int m_iterations = 3;
  uint64_t m_seed = 0;
  std::vector<double> m_gt;
  double m_eps = 2.0;
  mat->add_option("src", m_a, "source image")->required();
  mat->add_option("dst", m_b, "target image")->required();
  mat->add_option("--iterations", m_iterations);
  mat->add_option("--seed", m_seed);
  mat->add_option("--out", m_out, "match field (*.dirf)");
  mat->add_option("--offsets-out", m_len_out, "offset-length map as 16-bit PGM");
  mat->add_option("--gt-affine", m_gt, "a,b,c,d,tx,ty of the true map (enables repeatability)")
      ->delimiter(',')
      ->expected(6);
  mat->add_option("--eps", m_eps, "repeatability tolerance (pixels)");
  mat->callback([&]() {
    const GrayImage img_a = load_image(m_a);
    const GrayImage img_b = load_image(m_b);
    const FeatureField fa = pooled_field(img_a, mopts, threads);
    const FeatureField fb = pooled_field(img_b, mopts, threads);
    MatchParams params;
    params.iterations = m_iterations;
    params.seed = m_seed;
    const MatchField mf = dense_match(fa, fb, params);
    if (!m_out.empty()) match_save(m_out, mf);
    if (!m_len_out.empty()) {
      DMat len(mf.height, mf.width, 0.0);
      for (int y = 0; y < mf.height; ++y) {
        for (int x = 0; x < mf.width; ++x) {
          len(y, x) = std::hypot(mf.dx(y, x), mf.dy(y, x));
        }
      }
      save_pgm16(m_len_out, len);
    }
    if (!m_gt.empty()) {
      Affine gt{m_gt[0], m_gt[1], m_gt[2], m_gt[3], m_gt[4], m_gt[5]};
      std::cout << "repeatability," << repeatability(mf, gt, m_eps) << "\n";
    }
  });

  // ---- copymove ---------------------------------------------------------------
  auto* cm = app.add_subcommand("copymove", "copy-move forgery detection");
  CopyMoveConfig cm_cfg;
  std::string cm_image, cm_truth, cm_out, cm_scores;
  uint64_t cm_seed = 0;
  int cm_exclude = 8;
  std::string cm_basis = "pct", cm_norm = "l1", cm_strategy = "zoa", cm_pool = "avg";
  cm->add_option("image", cm_image)->required();
  cm->add_option("--truth", cm_truth, "ground-truth mask (PGM) for scoring");
  cm->add_option("--out", cm_out, "predicted mask (PGM P5, 0/255)");
  cm->add_option("--scores", cm_scores, "scores CSV (needs --truth)");
  cm->add_option("--seed", cm_seed);
  cm->add_option("--basis", cm_basis);
  cm->add_option("--norm", cm_norm);
  cm->add_option("--K", cm_cfg.order_bound);
  cm->add_option("--scales", cm_cfg.scales)->delimiter(',');
  cm->add_option("--strategy", cm_strategy);
  cm->add_option("--pool", cm_pool);
  cm->add_option("--upsample-long-edge", cm_cfg.upsample_long_edge);
  cm->add_option("--min-offset", cm_cfg.min_offset);
  cm->add_option("--consistency-radius", cm_cfg.consistency_radius);
  cm->add_option("--consistency-fraction", cm_cfg.consistency_fraction);
  cm->add_option("--open", cm_cfg.morph_open_radius);
  cm->add_option("--close", cm_cfg.morph_close_radius);
  cm->add_option("--iterations", cm_cfg.match_iterations);
  cm->add_option("--exclude-border", cm_exclude, "scoring exclusion band (pixels)");
  cm->callback([&]() {
    cm_cfg.kind = basis_from_name(cm_basis);
    cm_cfg.norm = parse_norm(cm_norm);
    cm_cfg.strategy = parse_strategy(cm_strategy);
    cm_cfg.pooling = parse_pool(cm_pool);
    const GrayImage image = load_image(cm_image);
    const ForgeryMask mask = copymove_detect(image, cm_cfg, cm_seed);
    if (!cm_out.empty()) save_pgm_mask(cm_out, mask.mask);
    std::cout << "copymove: " << mask.width << "x" << mask.height << " runtime "
              << mask.runtime_seconds << "s config " << std::hex << mask.config_hash << std::dec
              << "\n";
    if (!cm_truth.empty()) {
      const GrayImage truth_img = load_image(cm_truth);
      ByteMat truth(truth_img.height, truth_img.width, 0);
      for (int y = 0; y < truth_img.height; ++y) {
        for (int x = 0; x < truth_img.width; ++x) truth(y, x) = truth_img.at(x, y) > 0.5 ? 1 : 0;
      }
      const Scores s = score_mask(mask.mask, truth, cm_exclude);
      std::ostringstream csv;
      csv << "precision,recall,f1\n" << s.precision << "," << s.recall << "," << s.f1 << "\n";
      emit_csv(cm_scores, csv.str());
    }
  });

  // ---- phash ---------------------------------------------------------------
  auto* ph = app.add_subcommand("phash", "perceptual hashing");
  auto* ph_gen = ph->add_subcommand("gen", "image -> digest (*.dirh)");
  HashConfig ph_cfg;
  std::string ph_image, ph_out;
  std::string ph_basis = "pct", ph_norm = "inf", ph_strategy = "zoa", ph_pool = "avg";
  ph_gen->add_option("image", ph_image)->required();
  ph_gen->add_option("--out", ph_out)->required();
  ph_gen->add_option("--stride", ph_cfg.stride);
  ph_gen->add_option("--basis", ph_basis);
  ph_gen->add_option("--norm", ph_norm);
  ph_gen->add_option("--K", ph_cfg.order_bound);
  ph_gen->add_option("--scales", ph_cfg.scales)->delimiter(',');
  ph_gen->add_option("--strategy", ph_strategy);
  ph_gen->add_option("--pool", ph_pool);
  ph_gen->callback([&]() {
    ph_cfg.kind = basis_from_name(ph_basis);
    ph_cfg.norm = parse_norm(ph_norm);
    ph_cfg.strategy = parse_strategy(ph_strategy);
    ph_cfg.pooling = parse_pool(ph_pool);
    const GrayImage image = load_image(ph_image);
    const HashDigest digest = phash_generate(image, ph_cfg);
    digest_save(ph_out, digest);
    std::cout << "digest: " << digest.grid_cols << "x" << digest.grid_rows << " cells, "
              << digest.payload_bytes() << " payload bytes -> " << ph_out << "\n";
  });
  auto* ph_cmp = ph->add_subcommand("cmp", "compare two digests");
  std::string ph_a, ph_b, ph_mask_out, ph_map_out, ph_csv;
  ph_cmp->add_option("a", ph_a)->required();
  ph_cmp->add_option("b", ph_b)->required();
  ph_cmp->add_option("--out-mask", ph_mask_out, "tamper mask over the cell grid (PGM)");
  ph_cmp->add_option("--out-map", ph_map_out, "distance map over the cell grid (16-bit PGM)");
  ph_cmp->add_option("--out", ph_csv, "summary CSV");
  ph_cmp->callback([&]() {
    const HashDigest da = digest_load(ph_a);
    const HashDigest db = digest_load(ph_b);
    const HashCompareResult result = phash_compare(da, db);
    long flagged = 0;
    for (uint8_t v : result.tampered.data) flagged += v;
    std::ostringstream csv;
    csv << "threshold,tampered_cells,total_cells\n"
        << result.threshold << "," << flagged << "," << result.tampered.size() << "\n";
    emit_csv(ph_csv, csv.str());
    if (!ph_mask_out.empty()) save_pgm_mask(ph_mask_out, result.tampered);
    if (!ph_map_out.empty()) save_pgm16(ph_map_out, result.dist);
  });

  // ---- selftest --------------------------------------------------------------
  auto* self = app.add_subcommand("selftest", "run the built-in analytic oracle suite");
  self->callback([&]() { exit_code = cmd_selftest(); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  } catch (const UsageExit& e) {
    return e.code;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return exit_code;
}

namespace {

int cmd_selftest() {
  int failures = 0;
  auto check = [&](bool ok, const std::string& name) {
    std::cout << (ok ? "PASS " : "FAIL ") << name << "\n";
    if (!ok) ++failures;
  };

  // unity-image oracle
  {
    const GrayImage unity(64, 64, 1.0);
    const auto up8 = IntegrationStrategy::upsample(8);
    const Cpx dc = moments_at(unity, BasisKind::PCT, 0, 0, {32, 32, 8}, up8);
    check(std::abs(dc - Cpx{std::sqrt(kPi), 0.0}) <= 5e-3, "unity-image moment (0,0) ~ sqrt(pi)");
    bool ok = true;
    for (const OrderPair& p : order_set(BasisKind::PCT, OrderNorm::LInf, 3).pairs) {
      if (p.m == 0) continue;
      ok = ok && std::abs(moments_at(unity, BasisKind::PCT, p.n, p.m, {32, 32, 8}, up8)) <= 5e-3;
    }
    check(ok, "unity-image moments vanish for m != 0");
  }

  // radial orthogonality
  {
    bool ok = true;
    for (int n = 0; n <= 5 && ok; ++n) {
      for (int n2 = 0; n2 <= 5 && ok; ++n2) {
        const double target = n == n2 ? 1.0 / kTwoPi : 0.0;
        ok = std::abs(radial_orthogonality(BasisKind::PCT, n, n2, 0, 1024) - target) <= 1e-6;
      }
    }
    check(ok, "PCT radial orthogonality (quadrature)");
  }

  // path equivalence
  {
    GrayImage img(48, 48);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (double& s : img.samples) s = uni(rng);
    const Kernel kernel = kernel_zoa(BasisKind::PCT, 1, 1, 8);
    const CMat spatial = dense_spatial(img, kernel);
    const CMat spec = kernel_spectrum(kernel, fftu::good_size(48 + 16), fftu::good_size(48 + 16));
    const CMat fft = dense_fft(img, spec, 8);
    double max_diff = 0.0;
    for (size_t i = 0; i < spatial.data.size(); ++i) {
      max_diff = std::max(max_diff, std::abs(spatial.data[i] - fft.data[i]));
    }
    check(max_diff <= 1e-8, "fft path equals spatial path");

    // rotation phase law and flip conjugation on a disk-supported patch
    GrayImage patch(32, 32, 0.0);
    for (int y = 0; y < 32; ++y) {
      for (int x = 0; x < 32; ++x) {
        const double dx = x + 0.5 - 16.0, dy = y + 0.5 - 16.0;
        if (dx * dx + dy * dy <= 14.0 * 14.0) patch.at(x, y) = uni(rng);
      }
    }
    const GrayImage rot = rotate90(patch, 1);
    const GrayImage flipped = flip_rows(patch);
    bool rot_ok = true, flip_ok = true;
    for (const OrderPair& p : order_set(BasisKind::PCT, OrderNorm::LInf, 2).pairs) {
      const Kernel k = kernel_zoa(BasisKind::PCT, p.n, p.m, 16);
      const Cpx z = moments_at(patch, k, 16, 16);
      const Cpx zr = moments_at(rot, k, 16, 16);
      const Cpx zf = moments_at(flipped, k, 16, 16);
      const Cpx predicted = rotation_predict(z, p.m, -kPi / 2.0);
      rot_ok = rot_ok && std::abs(zr - predicted) <= 1e-6 * std::max(1.0, std::abs(z));
      flip_ok = flip_ok && std::abs(zf - std::conj(z)) <= 1e-9;
    }
    check(rot_ok, "grid-exact rotation phase law");
    check(flip_ok, "vertical flip conjugation");
  }

  std::cout << (failures == 0 ? "selftest OK" : "selftest FAILED") << "\n";
  return failures == 0 ? 0 : 3;
}

} // namespace

} // namespace dir::cli
