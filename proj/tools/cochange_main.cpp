#include "cochange/cli_config.hpp"

int main(int argc, char** argv) {
  return cochange::run_cli(argc, argv);
}
