#include <iostream>

#include "nfc/cli.h"

int main(int argc, char** argv) {
  return nfc::cli::Run(argc, argv, std::cout, std::cerr);
}
