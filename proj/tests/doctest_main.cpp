#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <cstring>
#include <vector>

#include "test_support.hpp"

namespace irsho_test {
std::string g_cli_path;
}

int main(int argc, char** argv) {
  std::vector<char*> args;
  args.reserve(static_cast<std::size_t>(argc));
  for (int i = 0; i < argc; ++i) {
    constexpr const char* prefix = "--cli=";
    if (std::strncmp(argv[i], prefix, 6) == 0) {
      irsho_test::g_cli_path = argv[i] + 6;
    } else {
      args.push_back(argv[i]);
    }
  }
  doctest::Context ctx(static_cast<int>(args.size()), args.data());
  return ctx.run();
}
