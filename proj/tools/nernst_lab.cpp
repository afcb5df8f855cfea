#include "cli_app.hpp"

int main(int argc, char** argv) { return nernst::cli::run(argc, argv); }
