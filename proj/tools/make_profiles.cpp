// Regenerates the shipped language-identification profiles from the
// training corpora:
//   paraforge-make-profiles data/profiles/train data/profiles
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "paraforge/prefilter.hpp"

int main(int argc, char** argv) {
  if (argc != 3) {
    std::cerr << "usage: paraforge-make-profiles <train-dir> <out-dir>\n";
    return 1;
  }
  namespace fs = std::filesystem;
  fs::path train_dir = argv[1];
  fs::path out_dir = argv[2];

  int built = 0;
  for (const auto& entry : fs::directory_iterator(train_dir)) {
    if (entry.path().extension() != ".txt") continue;
    std::string code = entry.path().stem().string();
    std::ifstream in(entry.path());
    std::ostringstream buf;
    buf << in.rdbuf();
    auto profile = paraforge::build_language_profile(code, buf.str());
    paraforge::save_language_profile(profile, out_dir / (code + ".json"));
    std::cout << code << ": " << profile.ngrams_by_rank.size() << " n-grams\n";
    ++built;
  }
  if (built == 0) {
    std::cerr << "no .txt training files in " << train_dir << "\n";
    return 1;
  }
  return 0;
}
