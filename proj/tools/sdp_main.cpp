#include "commands.hpp"

int main(int argc, char** argv) { return sdp::app::run_cli(argc, argv); }
