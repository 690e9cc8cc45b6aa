// Acceptance suite: replays the pinned-constant matrix through the
// command-line tool, checks determinism of the record stream, and prints
// one pass/fail line per criterion.

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace {

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

int run_capture(const std::string& cmd, std::string& err_out) {
  std::string full = cmd + " 2>&1 >/dev/null";
  FILE* p = popen(full.c_str(), "r");
  if (!p) return -1;
  std::array<char, 4096> buf{};
  while (fgets(buf.data(), buf.size(), p)) err_out += buf.data();
  return pclose(p);
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: acceptance <path-to-cli>\n";
    return 2;
  }
  std::string cli = argv[1];
  std::string out1 = "acceptance_run1.ndjson";
  std::string out2 = "acceptance_run2.ndjson";

  std::string log1, log2;
  int rc1 = run_capture(cli + " reproduce-paper --seed 42 --out " + out1, log1);
  int rc2 = run_capture(cli + " reproduce-paper --seed 42 --out " + out2, log2);

  // forward the per-criterion matrix of the first run
  std::istringstream lines(log1);
  std::string line;
  bool any_fail = false;
  while (std::getline(lines, line)) {
    if (line.rfind("[PASS]", 0) == 0 || line.rfind("[FAIL]", 0) == 0) {
      std::cout << line << "\n";
      if (line.rfind("[FAIL]", 0) == 0) any_fail = true;
    }
  }
  if (rc1 != 0) any_fail = true;

  std::string s1 = read_file(out1);
  std::string s2 = read_file(out2);
  bool deterministic = !s1.empty() && s1 == s2 && rc2 == rc1;
  std::cout << (deterministic ? "[PASS] " : "[FAIL] ")
            << "criterion 12: identical seed gives byte-identical record streams ("
            << s1.size() << " bytes)\n";
  if (!deterministic) any_fail = true;

  return any_fail ? 1 : 0;
}
