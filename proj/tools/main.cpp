#include "cli.hpp"

int main(int argc, char** argv) { return cdpre::cli::run(argc, argv); }
