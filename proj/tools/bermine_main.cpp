#include "bermine/cli.hpp"

int main(int argc, char** argv) { return bermine::cli::run(argc, argv); }
