// Writes the synthetic corpus as OFF files plus labels.csv.
//   clir_make_corpus DIR [per_class] [jitter] [seed]
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "support.hpp"

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: %s DIR [per_class] [jitter] [seed]\n", argv[0]);
    return 1;
  }
  const std::filesystem::path dir = argv[1];
  const int per_class = argc > 2 ? std::atoi(argv[2]) : 8;
  const double jitter = argc > 3 ? std::atof(argv[3]) : 0.01;
  const std::uint64_t seed = argc > 4 ? std::strtoull(argv[4], nullptr, 10) : 20240611;
  std::filesystem::create_directories(dir);
  std::ofstream labels(dir / "labels.csv");
  labels << "# model_id,class_label\n";
  for (const auto& m : clir::testing::synthetic_corpus(per_class, jitter, seed)) {
    clir::write_off_file(dir / (m.mesh.source_id() + ".off"), m.mesh);
    labels << m.mesh.source_id() << ',' << m.label << '\n';
  }
  return labels ? 0 : 2;
}
