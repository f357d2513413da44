// Regenerates the bundled network files under data/.
#include <fstream>
#include <iostream>

#include <cbnet/dot.hpp>
#include <cbnet/geneval.hpp>

int main(int argc, char** argv) {
    if (argc != 2) {
        std::cerr << "usage: write_networks <data-dir>\n";
        return 2;
    }
    const std::filesystem::path dir = argv[1];
    auto alarm = cbnet::alarm_network(1993);
    cbnet::save_network(dir / "alarm.json", alarm);
    std::ofstream dot(dir / "alarm.dot");
    cbnet::write_dot(dot, alarm.dag, alarm.names);
    cbnet::save_network(dir / "led.json", cbnet::led_network());
    return 0;
}
