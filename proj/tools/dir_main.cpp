#include "dir/cli.hpp"

int main(int argc, char** argv) {
  return dir::cli::run(argc, argv);
}
