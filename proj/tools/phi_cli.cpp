#include "verify.hpp"

int main(int argc, char** argv) { return verify::cli_run(argc, argv); }
