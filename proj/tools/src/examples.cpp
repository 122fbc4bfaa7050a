#include "examples.hpp"

namespace kseries_cli {

// Bundled probabilistic-loop programs. Where the source model is described
// in the literature without exact constants, representative values are
// chosen so the dynamics land in the documented operating range.
const std::vector<ExampleProgram>& example_programs() {
    static const std::vector<ExampleProgram> programs{
        {"irwin_hall", "sum of iid Uniform(0,1): Irwin-Hall(t) at iteration t",
         "x := 0\n"
         "while (True):\n"
         "    u := Uniform(0, 1)\n"
         "    x := x + u\n"
         "end\n"},

        {"robot", "differential-drive mobile robot pose (x, y, theta)",
         "x := Uniform(-0.1, 0.1)\n"
         "y := Uniform(-0.1, 0.1)\n"
         "theta := Normal(0, 0.1)\n"
         "while (True):\n"
         "    om_r := Beta(1, 3)\n"
         "    om_l := Uniform(-0.1, 0.1)\n"
         "    theta := theta + 0.1*(2 + om_r - om_l)\n"
         "    x := x + 0.05*(4 + om_l + om_r)*cos(theta)\n"
         "    y := y + 0.05*(4 + om_l + om_r)*sin(theta)\n"
         "end\n"},

        {"random_walk_1d", "symmetric +/-1 random walk",
         "x := 0\n"
         "while (True):\n"
         "    x := x + 1 {0.5} x - 1\n"
         "end\n"},

        {"random_walk_2d", "independent symmetric walks in x and y",
         "x := 0\n"
         "y := 0\n"
         "while (True):\n"
         "    x := x + 1 {0.5} x - 1\n"
         "    y := y + 1 {0.5} y - 1\n"
         "end\n"},

        {"turning_vehicle", "vehicle turning under speed and heading noise",
         "v := Uniform(6.5, 8.0)\n"
         "psi := Normal(-0.5, 0.01)\n"
         "x := Uniform(-0.1, 0.1)\n"
         "y := Uniform(-0.5, -0.3)\n"
         "while (True):\n"
         "    w1 := Uniform(-0.05, 0.05)\n"
         "    w2 := Normal(0, 0.01)\n"
         "    x := x + 0.1 * v * cos(psi)\n"
         "    y := y + 0.1 * v * sin(psi)\n"
         "    v := v + w1\n"
         "    psi := psi + w2\n"
         "end\n"},

        {"turning_vehicle_small_var",
         "turning vehicle, low-variance speed variant",
         "v := Normal(7.25, 0.01)\n"
         "psi := Normal(-0.5, 0.0025)\n"
         "x := Uniform(-0.1, 0.1)\n"
         "y := Uniform(-0.5, -0.3)\n"
         "while (True):\n"
         "    w2 := Normal(0, 0.0025)\n"
         "    x := x + 0.1 * v * cos(psi)\n"
         "    y := y + 0.1 * v * sin(psi)\n"
         "    psi := psi + w2\n"
         "end\n"},

        {"taylor_rule", "monetary policy rate under inflation/output shocks",
         "p := Normal(0.02, 0.0001)\n"
         "y := Normal(0.01, 0.0001)\n"
         "i := 0.04\n"
         "while (True):\n"
         "    dp := Normal(0, 0.0001)\n"
         "    dy := Normal(0, 0.0001)\n"
         "    p := p + dp\n"
         "    y := y + dy\n"
         "    i := 0.02 + p + 0.5 * (p - 0.02) + 0.5 * y\n"
         "end\n"},

        {"robotic_arm_2d", "planar arm tip position after noisy segments",
         "x := 0\n"
         "y := 0\n"
         "while (True):\n"
         "    d := Normal(6.0, 0.01)\n"
         "    ang := Normal(1.1, 0.0004)\n"
         "    x := x + d * cos(ang)\n"
         "    y := y + d * sin(ang)\n"
         "end\n"},

        {"rimless_wheel", "rimless wheel walker angular speed per step",
         "w := Uniform(-0.1, 0.1)\n"
         "while (True):\n"
         "    gamma := Normal(0.0262, 0.0001)\n"
         "    b1 := 0.4 + gamma\n"
         "    b2 := 0.4 - gamma\n"
         "    w := cos(0.4)*cos(0.4)*(w + 2*9.8*(1 - cos(b1))) - 2*9.8*(1 - cos(b2))\n"
         "end\n"},

        {"vasicek", "mean-reverting short-rate model",
         "r := 0.05\n"
         "while (True):\n"
         "    eps := Normal(0, 1)\n"
         "    r := r + 0.5 * (0.04 - r) + 0.01 * eps\n"
         "end\n"},

        {"stuttering_p", "stuttering accumulator with a coin-flip advance",
         "p := 0\n"
         "s := 1\n"
         "while (True):\n"
         "    u := Uniform(0, 2)\n"
         "    p := p + u + s {0.5} p\n"
         "    s := s + 1 {0.5} s\n"
         "end\n"},

        {"pdp", "piecewise-deterministic gene circuit (protein x, mRNA y)",
         "x := 110\n"
         "y := 10\n"
         "g := 1\n"
         "while (True):\n"
         "    g := 1 {0.3} 0\n"
         "    y := y + 50 * g - 0.3 * y\n"
         "    x := x + 5 * y - 0.2 * x\n"
         "end\n"},
    };
    return programs;
}

const ExampleProgram* find_example(const std::string& name) {
    for (const auto& p : example_programs())
        if (p.name == name) return &p;
    return nullptr;
}

}  // namespace kseries_cli
