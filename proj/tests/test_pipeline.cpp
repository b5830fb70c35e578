#include <doctest.h>

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <map>

#include "epo/fusion.hpp"
#include "epo/maskgen.hpp"
#include "epo/pipeline.hpp"
#include "testdata.hpp"

using namespace epo;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const char* tag) {
        path = fs::temp_directory_path() /
               (std::string("epo_pipe_") + tag + "_" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

// Writes the procedural two-pair dataset plus its manifest and returns the
// manifest path.
fs::path write_mini_dataset(const fs::path& dir) {
    DatasetManifest manifest;
    for (int variant = 0; variant < 2; ++variant) {
        testdata::MiniPair pair = testdata::mini_pair(variant);
        std::string id = "pair" + std::to_string(variant);
        write_image(dir / (id + "_vi.png"), pair.visible);
        write_image(dir / (id + "_ir.png"), pair.infrared);
        manifest.entries.push_back({id, id + "_vi.png", id + "_ir.png", "", ""});
    }
    fs::path mpath = dir / "manifest.json";
    write_manifest(mpath, manifest);
    return mpath;
}

std::map<std::string, std::vector<char>> snapshot_tree(const fs::path& dir) {
    std::map<std::string, std::vector<char>> out;
    for (const auto& e : fs::recursive_directory_iterator(dir)) {
        if (!e.is_regular_file()) continue;
        std::ifstream in(e.path(), std::ios::binary);
        out[fs::relative(e.path(), dir).string()] = {
            std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    }
    return out;
}

}  // namespace

TEST_CASE("run_synth writes five files per entry and reruns byte-identically") {
    TempDir tmp("synth");
    fs::path manifest = write_mini_dataset(tmp.path);
    SynthOptions opt;
    opt.manifest = manifest;
    opt.out_dir = tmp.path / "out1";
    opt.config.seed = 11;
    run_synth(opt);

    for (const std::string id : {"pair0", "pair1"})
        for (const char* suffix : {"_vi_oe.png", "_ir.png", "_oe_mask.png",
                                   "_contours.json", "_ir_overlay.png"})
            CHECK(fs::exists(opt.out_dir / (id + std::string(suffix))));

    SynthOptions again = opt;
    again.out_dir = tmp.path / "out2";
    run_synth(again);
    auto t1 = snapshot_tree(opt.out_dir);
    auto t2 = snapshot_tree(again.out_dir);
    CHECK(t1 == t2);

    SUBCASE("a different seed changes the outputs") {
        SynthOptions other = opt;
        other.out_dir = tmp.path / "out3";
        other.config.seed = 12;
        run_synth(other);
        CHECK(snapshot_tree(other.out_dir) != t1);
    }
}

TEST_CASE("run_synth error names the failing entry") {
    TempDir tmp("syntherr");
    DatasetManifest manifest;
    manifest.entries.push_back({"ghost", "missing_vi.png", "missing_ir.png", "", ""});
    fs::path mpath = tmp.path / "manifest.json";
    write_manifest(mpath, manifest);
    SynthOptions opt;
    opt.manifest = mpath;
    opt.out_dir = tmp.path / "out";
    CHECK_THROWS_WITH_AS(run_synth(opt), doctest::Contains("ghost"),
                         std::runtime_error);
}

TEST_CASE("stronger gain range produces a larger mean overexposed area") {
    TempDir tmp("gain");
    fs::path manifest = write_mini_dataset(tmp.path);
    auto maskArea = [&](double gainLo, double gainHi, const char* tag) {
        SynthOptions opt;
        opt.manifest = manifest;
        opt.out_dir = tmp.path / tag;
        opt.config.seed = 5;
        opt.config.gain_min = gainLo;
        opt.config.gain_max = gainHi;
        opt.config.sigma_min = 8.0;
        opt.config.sigma_max = 12.0;
        run_synth(opt);
        std::size_t area = 0;
        for (const std::string id : {"pair0", "pair1"})
            area += read_mask(opt.out_dir / (id + "_oe_mask.png")).count();
        return area;
    };
    std::size_t weak = maskArea(1.0, 1.0, "weak");
    std::size_t strong = maskArea(1.6, 1.6, "strong");
    CHECK(strong > weak);
}

TEST_CASE("run_fuse methods and determinism") {
    TempDir tmp("fuse");
    testdata::MiniPair pair = testdata::mini_pair(0);
    write_image(tmp.path / "vi.png", pair.visible);
    write_image(tmp.path / "ir.png", pair.infrared);

    FuseOptions opt;
    opt.visible = tmp.path / "vi.png";
    opt.infrared = tmp.path / "ir.png";
    opt.method = FuseMethod::Max;
    opt.out_y = tmp.path / "f_y.png";
    opt.out_rgb = tmp.path / "f_rgb.png";
    run_fuse(opt);
    REQUIRE(fs::exists(opt.out_y));
    REQUIRE(fs::exists(opt.out_rgb));

    SUBCASE("fused Y equals max of the quantized sources") {
        ImagePlane viY = rgb_to_ycbcr(read_rgb(tmp.path / "vi.png")).y;
        ImagePlane ir = read_plane(tmp.path / "ir.png");
        ImagePlane expected = max_fuse(viY, ir);
        ImagePlane got = read_plane(opt.out_y);
        for (std::size_t i = 0; i < got.size(); ++i)
            CHECK(std::abs(got[i] - expected[i]) <= 0.5 / 255.0 + 1e-12);
    }
    SUBCASE("reruns are byte-identical") {
        FuseOptions again = opt;
        again.out_y = tmp.path / "g_y.png";
        again.out_rgb = tmp.path / "g_rgb.png";
        run_fuse(again);
        std::ifstream a(opt.out_y, std::ios::binary), b(again.out_y, std::ios::binary);
        std::vector<char> ba{std::istreambuf_iterator<char>(a), {}};
        std::vector<char> bb{std::istreambuf_iterator<char>(b), {}};
        CHECK(ba == bb);
    }
    SUBCASE("exposure-aware without a mask path derives one by thresholding") {
        FuseOptions ea = opt;
        ea.method = FuseMethod::ExposureAware;
        ea.mask.clear();
        ea.out_y = tmp.path / "ea_y.png";
        ea.out_rgb.clear();
        CHECK_NOTHROW(run_fuse(ea));
        CHECK(fs::exists(ea.out_y));
    }
}

TEST_CASE("run_eval identity case") {
    TempDir tmp("eval");
    // f = vi = ir: use a single gray plane for all three roles.
    ImagePlane plane = testdata::random_plane(64, 64, 99);
    write_image(tmp.path / "p_vi.png", plane);
    write_image(tmp.path / "p_ir.png", plane);
    fs::create_directories(tmp.path / "fused");
    write_image(tmp.path / "fused" / "p_fused_y.png", plane);
    DatasetManifest manifest;
    manifest.entries.push_back({"p", "p_vi.png", "p_ir.png", "", ""});
    fs::path mpath = tmp.path / "manifest.json";
    write_manifest(mpath, manifest);

    EvalOptions opt;
    opt.manifest = mpath;
    opt.fused_dir = tmp.path / "fused";
    opt.out_report = tmp.path / "report.csv";
    auto rows = run_eval(opt);
    REQUIRE(rows.size() == 1);
    std::map<std::string, double> cols(rows[0].columns.begin(), rows[0].columns.end());
    CHECK(cols.at("SSIM") == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(cols.at("Qabf") == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(cols.at("MI") == doctest::Approx(2.0 * cols.at("EN")).epsilon(1e-9));
    CHECK(fs::exists(opt.out_report));

    SUBCASE("reruns are byte-identical") {
        EvalOptions again = opt;
        again.out_report = tmp.path / "report2.csv";
        run_eval(again);
        std::ifstream a(opt.out_report, std::ios::binary),
            b(again.out_report, std::ios::binary);
        std::vector<char> ba{std::istreambuf_iterator<char>(a), {}};
        std::vector<char> bb{std::istreambuf_iterator<char>(b), {}};
        CHECK(ba == bb);
    }
}

TEST_CASE("run_loss on the max-fusion target with an empty mask") {
    TempDir tmp("loss");
    testdata::MiniPair pair = testdata::mini_pair(1);
    ImagePlane viY = rgb_to_ycbcr(pair.visible).y;
    write_image(tmp.path / "vi.png", viY);
    write_image(tmp.path / "ir.png", pair.infrared);
    // Build the fused target from the quantized on-disk planes so the reloaded
    // images match exactly.
    ImagePlane viQ = read_plane(tmp.path / "vi.png");
    ImagePlane irQ = read_plane(tmp.path / "ir.png");
    write_image(tmp.path / "fused.png", max_fuse(viQ, irQ));
    write_mask(tmp.path / "mask.png", BinaryMask(64, 64));

    LossOptions opt;
    opt.visible = tmp.path / "vi.png";
    opt.infrared = tmp.path / "ir.png";
    opt.fused = tmp.path / "fused.png";
    opt.mask = tmp.path / "mask.png";
    opt.out_json = tmp.path / "loss.json";
    LossResult r = run_loss(opt);
    CHECK(r.breakdown.in_normal <= 1e-9);
    CHECK(r.breakdown.in_mask == 0.0);
    CHECK(fs::exists(opt.out_json));
}

TEST_CASE("run_schedule_check passes for 1, 3 and 8 steps") {
    for (int steps : {1, 3, 8}) {
        ScheduleCheckOptions opt;
        opt.sample_steps = steps;
        ScheduleCheckResult r = run_schedule_check(opt);
        CHECK(r.pass);
        CHECK(r.recovery_error <= 1e-6);
        CHECK(r.inversion_error <= 1e-9);
        CHECK(r.variance_violation <= 1e-12);
        CHECK(r.steps.size() == static_cast<std::size_t>(steps));
    }
    ScheduleCheckOptions cosine;
    cosine.kind = ScheduleKind::Cosine;
    CHECK(run_schedule_check(cosine).pass);
}

TEST_CASE("dominance label names") {
    CHECK(std::string(to_string(DominanceLabel::IntensityDominated)) ==
          "IntensityDominated");
    CHECK(std::string(to_string(DominanceLabel::TextureDominated)) ==
          "TextureDominated");
    CHECK(std::string(to_string(DominanceLabel::Neither)) == "Neither");
}
