#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <string>

#include "mot/io.hpp"

namespace fs = std::filesystem;

namespace {

const std::string kBin = MOTKIT_PATH;

int run(const std::string& args) {
    const int status = std::system((kBin + " " + args).c_str());
    if (WIFEXITED(status)) return WEXITSTATUS(status);
    return -1;
}

struct Workspace {
    fs::path dir;
    Workspace() {
        dir = fs::temp_directory_path() / "motkit_cli_test";
        fs::remove_all(dir);
        fs::create_directories(dir);
    }
    std::string path(const std::string& name) const { return (dir / name).string(); }
};

const char* kSceneCfg =
    "# two targets, light noise\n"
    "n_targets=2\n"
    "frame_count=40\n"
    "motion=constant_velocity\n"
    "noise_sigma=1\n"
    "seed=11\n";

}  // namespace

TEST_CASE("gen writes a sequence directory deterministically") {
    Workspace ws;
    mot::write_file(ws.path("scene.cfg"), kSceneCfg);
    REQUIRE(run("gen --config " + ws.path("scene.cfg") + " --out " + ws.path("seq") +
                " > /dev/null") == 0);
    CHECK(fs::exists(ws.dir / "seq" / "gt.csv"));
    CHECK(fs::exists(ws.dir / "seq" / "det.csv"));
    CHECK(fs::exists(ws.dir / "seq" / "seqinfo.txt"));

    REQUIRE(run("gen --config " + ws.path("scene.cfg") + " --out " + ws.path("seq2") +
                " > /dev/null") == 0);
    CHECK(mot::read_file(ws.path("seq/det.csv")) == mot::read_file(ws.path("seq2/det.csv")));
    CHECK(mot::read_file(ws.path("seq/gt.csv")) == mot::read_file(ws.path("seq2/gt.csv")));

    // A different seed changes the detections.
    REQUIRE(run("gen --config " + ws.path("scene.cfg") + " --out " + ws.path("seq3") +
                " --seed 99 > /dev/null") == 0);
    CHECK(mot::read_file(ws.path("seq/det.csv")) != mot::read_file(ws.path("seq3/det.csv")));
}

TEST_CASE("track, eval and tune cooperate end to end") {
    Workspace ws;
    mot::write_file(ws.path("scene.cfg"), kSceneCfg);
    REQUIRE(run("gen --config " + ws.path("scene.cfg") + " --out " + ws.path("seq") +
                " > /dev/null") == 0);

    REQUIRE(run("track --tracker TBD --det " + ws.path("seq/det.csv") + " --out " +
                ws.path("out.csv") + " > /dev/null") == 0);
    CHECK(fs::exists(ws.path("out.csv")));
    REQUIRE(fs::exists(ws.path("out.csv.manifest")));
    const std::string manifest = mot::read_file(ws.path("out.csv.manifest"));
    CHECK(manifest.find("tracker=TBD") != std::string::npos);
    CHECK(manifest.find("seconds=") != std::string::npos);
    CHECK(manifest.find("param.overlap_min=") != std::string::npos);

    REQUIRE(run("eval --gt " + ws.path("seq/gt.csv") + " --hyp " + ws.path("out.csv") +
                " --seqinfo " + ws.path("seq/seqinfo.txt") + " --name TBD --out " +
                ws.path("result") + " --curves " + ws.path("curves.csv") + " > " +
                ws.path("eval_stdout.txt")) == 0);
    const std::string table = mot::read_file(ws.path("result.txt"));
    CHECK(table.find("Method") != std::string::npos);
    CHECK(table.find("MOTA") != std::string::npos);
    CHECK(table.find("TBD") != std::string::npos);
    CHECK(mot::read_file(ws.path("eval_stdout.txt")) == table);
    const std::string kv = mot::read_file(ws.path("result.kv"));
    CHECK(kv.find("mota=") != std::string::npos);
    CHECK(kv.find("hz=") != std::string::npos);
    const std::string curves = mot::read_file(ws.path("curves.csv"));
    CHECK(curves.rfind("frame,fp,fn\n", 0) == 0);

    // Tuning: deterministic report, byte-identical across reruns and jobs.
    REQUIRE(run("tune --tracker TBD --train " + ws.path("seq") + " --out " +
                ws.path("report1.txt") + " --runs 4 --seed 3 > /dev/null") == 0);
    REQUIRE(run("tune --tracker TBD --train " + ws.path("seq") + " --out " +
                ws.path("report2.txt") + " --runs 4 --seed 3 --jobs 3 > /dev/null") == 0);
    CHECK(mot::read_file(ws.path("report1.txt")) == mot::read_file(ws.path("report2.txt")));
    CHECK(mot::read_file(ws.path("report1.txt")).find("best_index=") != std::string::npos);
}

TEST_CASE("parameter overrides reach the tracker") {
    Workspace ws;
    mot::write_file(ws.path("scene.cfg"), kSceneCfg);
    REQUIRE(run("gen --config " + ws.path("scene.cfg") + " --out " + ws.path("seq") +
                " > /dev/null") == 0);
    REQUIRE(run("track --tracker TBD --det " + ws.path("seq/det.csv") + " --out " +
                ws.path("a.csv") + " --params overlap_min=0.4,bridge_gate=25 > /dev/null") == 0);
    const std::string manifest = mot::read_file(ws.path("a.csv.manifest"));
    CHECK(manifest.find("param.overlap_min=0.4") != std::string::npos);
    CHECK(manifest.find("param.bridge_gate=25") != std::string::npos);

    mot::write_file(ws.path("params.txt"), "overlap_min=0.25\n");
    REQUIRE(run("track --tracker TBD --det " + ws.path("seq/det.csv") + " --out " +
                ws.path("b.csv") + " --params-file " + ws.path("params.txt") +
                " > /dev/null") == 0);
    CHECK(mot::read_file(ws.path("b.csv.manifest")).find("param.overlap_min=0.25") !=
          std::string::npos);
}

TEST_CASE("bad invocations exit nonzero with a diagnostic") {
    Workspace ws;
    mot::write_file(ws.path("scene.cfg"), kSceneCfg);
    REQUIRE(run("gen --config " + ws.path("scene.cfg") + " --out " + ws.path("seq") +
                " > /dev/null") == 0);

    CHECK(run("track --tracker Ghost --det " + ws.path("seq/det.csv") + " --out " +
              ws.path("x.csv") + " 2> " + ws.path("err.txt")) != 0);
    const std::string err = mot::read_file(ws.path("err.txt"));
    CHECK(err.find("Ghost") != std::string::npos);
    CHECK(err.find("DP_NMS") != std::string::npos);  // names the valid set

    CHECK(run("track --tracker TBD --det " + ws.path("seq/det.csv") + " --out " +
              ws.path("x.csv") + " --params bogus_knob=1 2> /dev/null") != 0);
    CHECK(run("track --tracker TBD --det " + ws.path("missing.csv") + " --out " +
              ws.path("x.csv") + " 2> /dev/null") != 0);
    CHECK(run("eval --gt " + ws.path("missing.csv") + " --hyp " + ws.path("seq/gt.csv") +
              " 2> /dev/null") != 0);
    CHECK(run("definitely-not-a-subcommand 2> /dev/null") != 0);
}

TEST_CASE("an empty detection file tracks to an empty result") {
    Workspace ws;
    mot::write_file(ws.path("empty.csv"), "");
    REQUIRE(run("track --tracker DP_NMS --det " + ws.path("empty.csv") + " --out " +
                ws.path("out.csv") + " > /dev/null") == 0);
    CHECK(mot::read_file(ws.path("out.csv")).empty());
}

TEST_CASE("version flag prints and exits cleanly") {
    Workspace ws;
    CHECK(run("--version > " + ws.path("v.txt")) == 0);
    CHECK(mot::read_file(ws.path("v.txt")).find("0.1.0") != std::string::npos);
}
