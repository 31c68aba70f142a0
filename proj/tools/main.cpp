#include "rotordyn/run.hpp"

int main(int argc, char** argv) { return rotordyn::run_cli(argc, argv); }
