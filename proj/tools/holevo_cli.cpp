#include "holevo/cli.hpp"

int main(int argc, char** argv) { return holevo::cli::run(argc, argv); }
