#include <gtest/gtest.h>

#include <sys/wait.h>

#include <algorithm>
#include <csignal>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

const std::string kBin = TRICACHE_BIN;

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("tricache-cli-" + std::to_string(::getpid()) + "-" +
                                        ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  int tricache(const std::string& args, std::string* out = nullptr) const {
    const std::string log = path("stdout.txt");
    const std::string cmd = kBin + " " + args + " > " + log + " 2> " + path("stderr.txt");
    const int rc = std::system(cmd.c_str());
    if (out) *out = read(log);
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  }

  void write(const std::string& name, const std::string& text) const { std::ofstream(path(name)) << text; }

  static std::string read(const std::string& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  static std::size_t lines(const std::string& text) { return std::count(text.begin(), text.end(), '\n'); }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, GenRmat) {
  ASSERT_EQ(tricache("gen-rmat --scale 10 --ef 8 --seed 3 -o " + path("a.el")), 0);
  ASSERT_EQ(tricache("gen-rmat --scale 10 --ef 8 --seed 3 -o " + path("b.el")), 0);
  ASSERT_EQ(tricache("gen-rmat --scale 10 --ef 8 --seed 4 -o " + path("c.el")), 0);
  const std::string a = read(path("a.el"));
  EXPECT_EQ(lines(a), 8192u);
  EXPECT_EQ(a, read(path("b.el")));
  EXPECT_NE(a, read(path("c.el")));
}

TEST_F(Cli, UsageErrors) {
  EXPECT_EQ(tricache("gen-rmat -o " + path("x.el")), 2);
  EXPECT_EQ(tricache("frobnicate"), 2);
  EXPECT_EQ(tricache("gen-rmat --scale 4 --a 0.9 -o " + path("x.el")), 2);
  write("k3.el", "0 1\n1 2\n2 0\n");
  EXPECT_EQ(tricache("run " + path("k3.el") + " --p 0"), 2);
  EXPECT_EQ(tricache("run " + path("k3.el") + " --peers 127.0.0.1:1"), 2);
  EXPECT_EQ(tricache("run " + path("k3.el") + " --cache-total 64 --cache-adj-bytes 8"), 2);
  EXPECT_EQ(tricache("run " + path("missing.el")), 2);
}

TEST_F(Cli, RunWritesScoresAndStats) {
  ASSERT_EQ(tricache("gen-rmat --scale 9 --ef 8 -o " + path("g.el")), 0);
  ASSERT_EQ(tricache("run " + path("g.el") + " --p 4 -o " + path("plain.lcc") + " --stats-csv " + path("s.csv")), 0);
  const std::string csv = read(path("s.csv"));
  EXPECT_EQ(lines(csv), 5u);
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "node,local_reads,remote_reads,gets_offsets,hits_offsets,gets_adj,hits_adj,compulsory,evictions,"
            "bytes_net,bytes_cache,comm_time_s,overlap_time_s,compute_time_s,triangles");
  ASSERT_EQ(tricache("run " + path("g.el") + " --p 4 --cache-adj-bytes 0 -o " + path("zero.lcc")), 0);
  ASSERT_EQ(tricache("run " + path("g.el") + " --p 4 --cache-adj-bytes 20000 --cache-offsets-bytes 4000 "
                     "--policy positional -o " + path("cached.lcc")), 0);
  ASSERT_EQ(tricache("run " + path("g.el") + " --p 2 --cache-total 30000 --method ssi --workers 2 -o " +
                     path("total.lcc")), 0);
  const std::string plain = read(path("plain.lcc"));
  EXPECT_GT(lines(plain), 0u);
  EXPECT_EQ(read(path("zero.lcc")), plain);
  EXPECT_EQ(read(path("cached.lcc")), plain);
  EXPECT_EQ(read(path("total.lcc")), plain);
}

TEST_F(Cli, TriangleCount) {
  write("k4.el", "0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n");
  std::string out;
  ASSERT_EQ(tricache("run " + path("k4.el") + " --mode tc --p 2", &out), 0);
  EXPECT_EQ(out, "triangles 4\nraw 12\n");
  EXPECT_EQ(tricache("run " + path("k4.el") + " --mode tc --directed"), 2);
}

TEST_F(Cli, Compare) {
  write("k3.el", "0 1\n1 2\n2 0\n");
  std::string out;
  EXPECT_EQ(tricache("compare " + path("k3.el") + " --p 2", &out), 0);
  EXPECT_NE(out.find("match"), std::string::npos);
  EXPECT_EQ(tricache("compare " + path("k3.el") + " --p 2 --fault-bias 1", &out), 1);
  EXPECT_NE(out.find("MISMATCH"), std::string::npos);
  for (int seed = 0; seed < 20; ++seed) {
    const std::string g = path("r" + std::to_string(seed) + ".el");
    ASSERT_EQ(tricache("gen-rmat --scale 8 --ef 6 --seed " + std::to_string(seed) + " -o " + g), 0);
    EXPECT_EQ(tricache("compare " + g + " --p " + std::to_string(1 + seed % 4) + " --seed " + std::to_string(seed)), 0)
        << "seed " << seed;
  }
}

TEST_F(Cli, PreprocessedInput) {
  ASSERT_EQ(tricache("gen-rmat --scale 9 --ef 8 -o " + path("g.el")), 0);
  ASSERT_EQ(tricache("preprocess " + path("g.el") + " --seed 5 -o " + path("g.csr")), 0);
  std::string a, b;
  ASSERT_EQ(tricache("run " + path("g.csr") + " --mode tc --p 3", &a), 0);
  ASSERT_EQ(tricache("run " + path("g.el") + " --mode tc --p 2", &b), 0);
  EXPECT_EQ(a, b);
}

TEST_F(Cli, Sweep) {
  ASSERT_EQ(tricache("gen-rmat --scale 9 --ef 8 -o " + path("g.el")), 0);
  ASSERT_EQ(tricache("sweep " + path("g.el") + " --p 2 --fractions 0.25,1 -o " + path("s.csv")), 0);
  EXPECT_EQ(lines(read(path("s.csv"))), 1u + 6u);
  EXPECT_EQ(tricache("sweep " + path("g.el") + " --fractions 0,1"), 2);
}

TEST_F(Cli, TcpServe) {
  ASSERT_EQ(tricache("gen-rmat --scale 9 --ef 8 -o " + path("g.el")), 0);
  ASSERT_EQ(tricache("partition " + path("g.el") + " --seed 7 --p 2 -o " + path("shard")), 0);
  ASSERT_TRUE(fs::exists(path("shard.0.prt")));
  ASSERT_TRUE(fs::exists(path("shard.1.prt")));
  const std::string cmd = "echo $$; exec " + kBin + " tcp-serve " + path("shard.0.prt") + " " + path("shard.1.prt") +
                          " --port 0";
  FILE* server = ::popen(cmd.c_str(), "r");
  ASSERT_NE(server, nullptr);
  char buf[128];
  ASSERT_TRUE(std::fgets(buf, sizeof buf, server));
  const pid_t pid = std::stoi(buf);
  ASSERT_TRUE(std::fgets(buf, sizeof buf, server));
  std::string line(buf);
  ASSERT_EQ(line.rfind("listening ", 0), 0u) << line;
  const std::string peer = line.substr(10, line.find('\n') - 10);

  std::string tcp, sim;
  EXPECT_EQ(tricache("run " + path("g.el") + " --seed 7 --p 2 --backend tcp --peers " + peer, &tcp), 0);
  EXPECT_EQ(tricache("run " + path("g.el") + " --seed 7 --p 2", &sim), 0);
  EXPECT_EQ(tcp, sim);
  ::kill(pid, SIGTERM);
  EXPECT_EQ(WEXITSTATUS(::pclose(server)), 0);
}
