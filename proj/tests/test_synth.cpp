#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "obbtrack/synth.hpp"
#include "oracles.hpp"

using namespace obbtrack;

namespace {

namespace fs = std::filesystem;

fs::path temp_dir() {
    const fs::path dir = fs::temp_directory_path() / "obbtrack_test_synth";
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

SynthConfig zero_noise(Preset p, int agents, int frames, std::uint64_t seed) {
    SynthConfig sc;
    sc.preset = p;
    sc.n_agents = agents;
    sc.frames = frames;
    sc.seed = seed;
    sc.noise = NoiseModel{0.0, 0.0, 0.0, 0.0};
    return sc;
}

}  // namespace

TEST_CASE("build_scenario: dimensions, counts, and turn-rate cap") {
    for (const Preset p : {Preset::Line, Preset::Cross, Preset::Figure8, Preset::Herd}) {
        SynthConfig sc;
        sc.preset = p;
        sc.n_agents = 5;
        sc.frames = 120;
        sc.seed = 11;
        const Scenario s = build_scenario(sc);
        REQUIRE(s.poses.size() == 5);
        for (int a = 0; a < 5; ++a) {
            REQUIRE(s.poses[a].size() == 120);
            CHECK(s.lengths[a] > s.widths[a]);
            for (int t = 1; t < 120; ++t) {
                CHECK(shortest_arc_deg(s.poses[a][t].heading_deg,
                                       s.poses[a][t - 1].heading_deg) <= sc.max_turn_deg + 1e-9);
            }
        }
    }
}

TEST_CASE("figure8 sweeps the full circle of headings") {
    const Scenario s = build_scenario(zero_noise(Preset::Figure8, 1, 500, 21));
    int octants_hit[8] = {};
    for (const AgentPose& p : s.poses[0]) {
        octants_hit[static_cast<int>(p.heading_deg / 45.0) % 8] = 1;
    }
    int covered = 0;
    for (int o : octants_hit) covered += o;
    CHECK(covered == 8);
}

TEST_CASE("generate: identical bytes for identical seeds") {
    SynthConfig sc;
    sc.preset = Preset::Herd;
    sc.n_agents = 3;
    sc.frames = 30;
    sc.seed = 424242;

    const auto p1 = generate(sc, (temp_dir() / "g1").string());
    const auto p2 = generate(sc, (temp_dir() / "g2").string());
    CHECK(slurp(p1.detections) == slurp(p2.detections));
    CHECK(slurp(p1.parts) == slurp(p2.parts));
    CHECK(slurp(p1.ground_truth) == slurp(p2.ground_truth));

    sc.seed = 424243;
    const auto p3 = generate(sc, (temp_dir() / "g3").string());
    CHECK(slurp(p1.detections) != slurp(p3.detections));
}

TEST_CASE("generate: zero noise puts parts exactly on the true short-edge midpoints") {
    const auto paths = generate(zero_noise(Preset::Line, 2, 10, 5), (temp_dir() / "gz").string());

    DetectionReader dets(paths.detections);
    PartReader parts(paths.parts);
    const auto gt = read_ground_truth(paths.ground_truth);

    long checked = 0;
    while (auto rec = dets.next()) {
        const auto& gt_dets = gt[rec->frame].detections;
        REQUIRE(gt_dets.size() == rec->detections.size());
        for (const PartRecord& pr : parts.take_frame(rec->frame)) {
            const OrientedBox& det = rec->detections[pr.det_index];
            const GtDetection& g = gt_dets[pr.det_index];
            const CropRegion crop = crop_square(det);
            const double a = deg_to_rad(g.heading_deg);
            const Vec2 u{std::cos(a), std::sin(a)};
            const double half = canonicalize(g.box).length / 2.0;
            for (const PartDetection& p : pr.parts) {
                const Vec2 truth = g.box.center + u * (p.part == PartClass::Head ? half : -half);
                const Vec2 got = crop_to_frame(crop, p.box.center());
                CHECK(std::abs(got.x - truth.x) < 1e-9);
                CHECK(std::abs(got.y - truth.y) < 1e-9);
                ++checked;
            }
        }
    }
    CHECK(checked == 10 * 2 * 4);  // 2 agents x (head+tail, head, tail) parts per frame
}

TEST_CASE("generate: certain misses empty the parts bodies") {
    SynthConfig sc = zero_noise(Preset::Line, 1, 5, 9);
    sc.noise.miss_rate = 1.0;
    const auto paths = generate(sc, (temp_dir() / "gm").string());

    PartReader parts(paths.parts);
    for (long f = 0; f < 5; ++f) {
        const auto recs = parts.take_frame(f);
        CHECK(recs.size() == 3);  // one record per detector, all empty
        for (const auto& r : recs) CHECK(r.parts.empty());
    }
}

TEST_CASE("eval_heads: exact vote is correct, displaced vote is not") {
    // one detection, axis-aligned: crop side 40, head at (70, 50)
    const fs::path dir = temp_dir();
    const auto write = [&](const char* name, const std::string& body) {
        std::ofstream out(dir / name);
        out << body;
        return (dir / name).string();
    };
    const std::string dets = write(
        "eh_dets.jsonl",
        R"({"frame": 0, "detections": [{"cx": 50, "cy": 50, "w": 40, "h": 18, "angle_deg": 0, "score": 0.9}]})"
        "\n");
    const std::string gt = write(
        "eh_gt.jsonl",
        R"({"frame": 0, "detections": [{"cx": 50, "cy": 50, "w": 40, "h": 18, "angle_deg": 0, "score": 1.0, "agent_id": 0, "heading_deg": 0}]})"
        "\n");

    const CropRegion crop = crop_square({{50, 50}, 40, 18, 0, 0.9});
    const double side = part_box_side(crop);
    const Vec2 head_crop = frame_to_crop(crop, {70.0, 50.0});

    const auto parts_at = [&](double dx) {
        std::ostringstream body;
        body << R"({"frame": 0, "det_index": 0, "detector": "head", "parts": [{"class": "head", "cx": )"
             << head_crop.x + dx << R"(, "cy": )" << head_crop.y
             << R"(, "side": )" << side << R"(, "score": 0.9}]})" << "\n";
        return write("eh_parts.jsonl", body.str());
    };

    CHECK(eval_heads(dets, parts_at(0.0), gt, std::nullopt).accuracy() == doctest::Approx(1.0));
    CHECK(eval_heads(dets, parts_at(side), gt, std::nullopt).accuracy() == doctest::Approx(0.0));

    // closed-form boundary: squares of side s at offset d overlap with
    // IoU (s-d)/(s+d), which crosses 0.3 at d = 7s/13
    const double boundary = 7.0 * side / 13.0;
    CHECK(oracle::shifted_square_iou(side, boundary, 0.0) == doctest::Approx(0.3));
    CHECK(eval_heads(dets, parts_at(boundary * 0.999), gt, std::nullopt).accuracy() ==
          doctest::Approx(1.0));
    CHECK(eval_heads(dets, parts_at(boundary * 1.001), gt, std::nullopt).accuracy() ==
          doctest::Approx(0.0));

    // no parts at all: counted, not correct
    const std::string none = write("eh_parts.jsonl", "");
    const HeadEval he = eval_heads(dets, none, gt, std::nullopt);
    CHECK(he.total == 1);
    CHECK(he.correct == 0);
}

TEST_CASE("eval_heads: tail-only estimates reflect through the center") {
    const fs::path dir = temp_dir();
    const auto write = [&](const char* name, const std::string& body) {
        std::ofstream out(dir / name);
        out << body;
        return (dir / name).string();
    };
    const std::string dets = write(
        "et_dets.jsonl",
        R"({"frame": 0, "detections": [{"cx": 50, "cy": 50, "w": 40, "h": 18, "angle_deg": 0, "score": 0.9}]})"
        "\n");
    const std::string gt = write(
        "et_gt.jsonl",
        R"({"frame": 0, "detections": [{"cx": 50, "cy": 50, "w": 40, "h": 18, "angle_deg": 0, "score": 1.0, "agent_id": 0, "heading_deg": 0}]})"
        "\n");

    const CropRegion crop = crop_square({{50, 50}, 40, 18, 0, 0.9});
    const double side = part_box_side(crop);
    const Vec2 tail_crop = frame_to_crop(crop, {30.0, 50.0});  // true tail

    std::ostringstream body;
    body << R"({"frame": 0, "det_index": 0, "detector": "tail", "parts": [{"class": "tail", "cx": )"
         << tail_crop.x << R"(, "cy": )" << tail_crop.y << R"(, "side": )" << side
         << R"(, "score": 0.9}]})" << "\n";
    const std::string parts = write("et_parts.jsonl", body.str());

    CHECK(eval_heads(dets, parts, gt, DetectorId::TailOnly).accuracy() == doctest::Approx(1.0));
    // the same parts file contains no head class at all, so the ensemble vote misses
    CHECK(eval_heads(dets, parts, gt, std::nullopt).accuracy() == doctest::Approx(0.0));
}

TEST_CASE("eval_tracks: perfect rows score perfectly") {
    const auto paths = generate(zero_noise(Preset::Line, 2, 20, 31), (temp_dir() / "ep").string());
    const auto gt = read_ground_truth(paths.ground_truth);

    std::vector<TrackRow> rows;
    for (const GtRecord& rec : gt) {
        for (const GtDetection& d : rec.detections) {
            rows.push_back({rec.frame, d.agent_id + 1, d.box.center.x, d.box.center.y,
                            canonicalize(d.box).length, canonicalize(d.box).width, d.heading_deg,
                            RowSource::Head, TrackStatus::Confirmed});
        }
    }
    const TrackEval e = eval_tracks(rows, paths.ground_truth);
    CHECK(e.id_switches == 0);
    CHECK(e.heading_flips == 0);
    CHECK(e.mean_position_error < 1e-9);
    CHECK(e.matched_rows == 40);
}

TEST_CASE("eval_tracks: a swap after a crossing counts one switch per target") {
    const auto paths = generate(zero_noise(Preset::Line, 2, 10, 13), (temp_dir() / "es").string());
    const auto gt = read_ground_truth(paths.ground_truth);

    std::vector<TrackRow> rows;
    for (const GtRecord& rec : gt) {
        for (const GtDetection& d : rec.detections) {
            // ids swap at frame 5
            const int id = rec.frame < 5 ? d.agent_id + 1 : 2 - d.agent_id;
            rows.push_back({rec.frame, id, d.box.center.x, d.box.center.y,
                            canonicalize(d.box).length, canonicalize(d.box).width, d.heading_deg,
                            RowSource::Head, TrackStatus::Confirmed});
        }
    }
    const TrackEval e = eval_tracks(rows, paths.ground_truth);
    CHECK(e.id_switches == 2);
}

TEST_CASE("eval_tracks: a u-turning target with a frozen tracker heading flips once") {
    const fs::path dir = temp_dir();
    std::ofstream gt_out(dir / "uturn_gt.jsonl");
    std::vector<TrackRow> rows;
    for (int f = 0; f < 20; ++f) {
        const double heading = std::min(180.0, 10.0 * f);  // 0 -> 180 u-turn
        gt_out << R"({"frame": )" << f
               << R"(, "detections": [{"cx": 100, "cy": 100, "w": 40, "h": 18, "angle_deg": )"
               << wrap_deg_180(heading) << R"(, "score": 1.0, "agent_id": 0, "heading_deg": )"
               << heading << "}]}\n";
        rows.push_back({f, 1, 100.0, 100.0, 40.0, 18.0, 0.0, RowSource::Predicted,
                        TrackStatus::Confirmed});
    }
    gt_out.close();

    const TrackEval e = eval_tracks(rows, (dir / "uturn_gt.jsonl").string());
    CHECK(e.heading_flips == 1);
    CHECK(e.id_switches == 0);
    CHECK(e.max_heading_jump_deg == doctest::Approx(0.0));
}

TEST_CASE("eval_tracks: max heading jump is the largest frame-to-frame arc") {
    const fs::path dir = temp_dir();
    std::ofstream gt_out(dir / "jump_gt.jsonl");
    gt_out << R"({"frame": 0, "detections": []})" << "\n";
    gt_out.close();

    const std::vector<TrackRow> rows = {
        {0, 1, 0, 0, 4, 2, 350.0, RowSource::Head, TrackStatus::Confirmed},
        {1, 1, 0, 0, 4, 2, 10.0, RowSource::Head, TrackStatus::Confirmed},   // 20 across the wrap
        {2, 1, 0, 0, 4, 2, 80.0, RowSource::Head, TrackStatus::Confirmed},   // 70
    };
    const TrackEval e = eval_tracks(rows, (dir / "jump_gt.jsonl").string());
    CHECK(e.max_heading_jump_deg == doctest::Approx(70.0));
}

TEST_CASE("voting dominance holds on a reduced noisy sweep") {
    SynthConfig sc;
    sc.preset = Preset::Herd;
    sc.n_agents = 6;
    sc.frames = 150;  // 900 crops; the acceptance suite runs the full-size sweep
    sc.seed = 20260808;
    sc.noise = NoiseModel{0.05, 0.05, 0.10, 0.02};
    const auto paths = generate(sc, (temp_dir() / "dom").string());

    const double vote =
        eval_heads(paths.detections, paths.parts, paths.ground_truth, std::nullopt).accuracy();
    double worst_single = 1.0;
    for (const DetectorId d : {DetectorId::HeadTail, DetectorId::HeadOnly, DetectorId::TailOnly}) {
        const double acc =
            eval_heads(paths.detections, paths.parts, paths.ground_truth, d).accuracy();
        worst_single = std::min(worst_single, acc);
        CHECK(vote >= acc - 1e-12);
    }
    CHECK(vote > worst_single);
}
