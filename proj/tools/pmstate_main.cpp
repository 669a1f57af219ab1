#include "pmstate/io.hpp"

int main(int argc, char** argv) {
  return pmstate::run_cli(argc, argv);
}
