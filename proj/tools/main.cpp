#include "geomphase/run.hpp"

int main(int argc, char** argv) { return geomphase::run_cli(argc, argv); }
