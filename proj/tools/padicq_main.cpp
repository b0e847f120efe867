#include "padicq/cli.hpp"

int main(int argc, char** argv) { return padicq::cli::run(argc, argv); }
