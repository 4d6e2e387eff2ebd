#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

struct Output {
  int code = -1;
  std::string out;
};

fs::path work_dir() {
  const fs::path d = fs::temp_directory_path() / ("navkit_cli_" + std::to_string(::getpid()));
  fs::create_directories(d);
  return d;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string scen(const std::string& name) { return std::string(NAVKIT_SOURCE_DIR) + "/scenarios/" + name; }

Output cli(const std::string& args) {
  const fs::path out = work_dir() / "stdout.txt";
  const std::string cmd = std::string(NAVKIT_CLI) + " " + args + " > " + out.string() + " 2> /dev/null";
  const int status = std::system(cmd.c_str());
  Output o;
  o.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  o.out = read_file(out);
  return o;
}

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream f(p, std::ios::binary);
  f << text;
}

}  // namespace

TEST(Cli, SimulateWritesOutputs) {
  const fs::path dir = work_dir() / "sim";
  const Output o = cli("simulate --scenario " + scen("empty_pursuit.json") + " --out " + dir.string());
  EXPECT_EQ(o.code, 0);
  EXPECT_NE(o.out.find("outcome target"), std::string::npos);
  EXPECT_TRUE(fs::exists(dir / "trajectory.csv"));
  EXPECT_NE(read_file(dir / "metrics.txt").find("success: 1"), std::string::npos);
  EXPECT_TRUE(fs::exists(dir / "events.log"));
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(cli("").code, 1);
  EXPECT_EQ(cli("simulate --scenario /nonexistent.json --out " + (work_dir() / "x").string()).code, 1);
  // Pursuit straight into a wall ends in a collision.
  const fs::path crash = work_dir() / "crash.json";
  write_text(crash,
             "{\"arena\": {\"min\": [0, 0], \"max\": [20, 20]},\n"
             " \"obstacles\": [{\"type\": \"disc\", \"center\": [6, 2], \"radius\": 1.0}],\n"
             " \"robot\": {\"position\": [2, 2], \"heading\": 0},\n"
             " \"target\": [10, 2],\n"
             " \"controller\": {\"type\": \"pursuit\"}}\n");
  EXPECT_EQ(cli("simulate --scenario " + crash.string() + " --out " + (work_dir() / "crash").string()).code, 2);
}

TEST(Cli, SimulateIsByteIdentical) {
  const fs::path a = work_dir() / "det_a", b = work_dir() / "det_b";
  cli("simulate --scenario " + scen("cluttered_02.json") + " --out " + a.string());
  cli("simulate --scenario " + scen("cluttered_02.json") + " --out " + b.string());
  for (const char* f : {"trajectory.csv", "metrics.txt", "events.log"})
    EXPECT_EQ(read_file(a / f), read_file(b / f)) << f;
}

TEST(Cli, TrainChainTable) {
  const fs::path q = work_dir() / "chain.q";
  const Output o = cli("train --scenario " + scen("chain_mdp.json") + " --episodes 100 --out " + q.string());
  ASSERT_EQ(o.code, 0);
  EXPECT_EQ(o.out.rfind("episode,return,total\n", 0), 0u);
  const std::string table = read_file(q);
  EXPECT_NE(table.find("0 0 80"), std::string::npos) << table;
  EXPECT_NE(table.find("1 0 100"), std::string::npos) << table;
}

TEST(Cli, TrainWithZeroEpisodes) {
  const fs::path q = work_dir() / "zero.q";
  const Output o = cli("train --scenario " + scen("bench_static.json") + " --episodes 0 --out " + q.string());
  EXPECT_EQ(o.code, 0);
  EXPECT_EQ(o.out, "episode,return,total\n");
  EXPECT_TRUE(fs::exists(q));
  EXPECT_EQ(cli("train --scenario " + scen("bench_static.json") + " --episodes -1 --out " + q.string()).code, 1);
}

TEST(Cli, CoverageRejectsBadAlpha) {
  const fs::path w = work_dir() / "cov.csv";
  EXPECT_EQ(cli("coverage --terrain " + scen("terrain_20x20.json") + " --alpha 4 --mode lattice --out " + w.string()).code, 1);
  EXPECT_EQ(cli("coverage --terrain " + scen("terrain_20x20.json") + " --alpha 1.5 --mode other --out " + w.string()).code, 1);
}

TEST(Cli, CoverageArtGalleryIsComplete) {
  const fs::path w = work_dir() / "ag.csv";
  const Output o =
      cli("coverage --terrain " + scen("terrain_occlusion.json") + " --alpha 1.5707963 --mode artgallery --out " + w.string());
  EXPECT_EQ(o.code, 0);
  EXPECT_NE(o.out.find("uncovered: 0"), std::string::npos) << o.out;
  EXPECT_EQ(read_file(w).rfind("x,y,z,delta\n", 0), 0u);
}

TEST(Cli, RouteAlgorithms) {
  const fs::path t = work_dir() / "tour.txt";
  EXPECT_EQ(cli("route --waypoints " + scen("waypoints_sparse.csv") + " --algo nope --out " + t.string()).code, 1);
  for (const char* algo : {"alternating", "spiral", "csa"}) {
    const Output o = cli("route --waypoints " + scen("waypoints_sparse.csv") + " --algo " + algo + " --out " + t.string());
    EXPECT_EQ(o.code, 0) << algo;
    EXPECT_NE(o.out.find(std::string("algorithm ") + algo), std::string::npos) << o.out;
  }
  const fs::path two = work_dir() / "two.csv";
  write_text(two, "x,y,z,delta\n0,0,10,0\n10,0,10,0\n");
  EXPECT_EQ(cli("route --waypoints " + two.string() + " --algo alternating --out " + t.string()).code, 0);
  const fs::path one = work_dir() / "one.csv";
  write_text(one, "x,y,z,delta\n0,0,10,0\n");
  EXPECT_EQ(cli("route --waypoints " + one.string() + " --algo spiral --out " + t.string()).code, 1);
}

TEST(Cli, RenderIsByteIdentical) {
  const fs::path traj = work_dir() / "three.csv";
  write_text(traj,
             "t,x,y,z,theta,psi,mode,u,d_min\n"
             "0.000,1.0,1.0,0.0,0.0,0.0,R1,0.0,inf\n"
             "0.100,1.05,1.0,0.0,0.0,0.0,R1,0.0,inf\n"
             "0.200,1.10,1.02,0.0,0.3,0.0,R2,0.5,2.0\n");
  const fs::path a = work_dir() / "a.svg", b = work_dir() / "b.svg";
  EXPECT_EQ(cli("render --input " + traj.string() + " --out " + a.string()).code, 0);
  EXPECT_EQ(cli("render --input " + traj.string() + " --out " + b.string()).code, 0);
  const std::string svg = read_file(a);
  EXPECT_EQ(svg.rfind("<svg", 0) == 0 || svg.rfind("<?xml", 0) == 0, true);
  EXPECT_EQ(svg, read_file(b));
}

TEST(Cli, CompareToursIsByteIdentical) {
  const std::string args = "compare --waypoints " + scen("waypoints_two_cluster.csv");
  const Output a = cli(args), b = cli(args);
  EXPECT_EQ(a.code, 0);
  EXPECT_FALSE(a.out.empty());
  EXPECT_EQ(a.out, b.out);
}
