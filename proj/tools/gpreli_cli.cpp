#include <gpreli/cli.hpp>

int main(int argc, char** argv) {
    return gpreli::parse_and_dispatch(argc, argv);
}
