// ttable: dump/verify the binary table of T_a(m) values used by the census.

#include <cstdio>
#include <string>

#include "CLI11.hpp"
#include "mlab/expsums.hpp"

int main(int argc, char** argv) {
  CLI::App app{"binary T-table dump/verify"};
  app.require_subcommand(1);

  auto* dump = app.add_subcommand("dump", "write tables for all m <= max-m");
  uint64_t max_m = 48;
  std::string path = "ttables.bin";
  dump->add_option("--max-m", max_m, "largest modulus (default 48)");
  dump->add_option("--out", path, "output path")->required();

  auto* verify = app.add_subcommand("verify", "recompute and check a dump");
  std::string in_path;
  verify->add_option("--in", in_path, "input path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  if (dump->parsed()) {
    mlab::expsums::dump_t_tables(path, max_m);
    std::printf("wrote %s (m <= %llu)\n", path.c_str(), static_cast<unsigned long long>(max_m));
    return 0;
  }
  auto triples = mlab::expsums::load_t_tables(in_path);
  uint64_t bad = 0;
  for (const auto& t : triples)
    if (t.t != mlab::expsums::T(static_cast<int64_t>(t.b), t.m)) ++bad;
  std::printf("%zu records, %llu mismatches\n", triples.size(),
              static_cast<unsigned long long>(bad));
  return bad == 0 ? 0 : 1;
}
