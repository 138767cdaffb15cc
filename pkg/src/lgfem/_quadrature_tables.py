"""Frozen symmetric Gauss quadrature tables for the reference triangle.

Generated by tools/make_quadrature_tables.py; do not edit by hand.
Points are barycentric triples, weights sum to 1/2 (the reference
triangle area).  TABLES[n] = (degree, [(w, l0, l1, l2), ...]).
"""

TABLES = {
    7: (5, [
        (0.11250000000000000, 0.33333333333333333, 0.33333333333333333, 0.33333333333333333),
        (0.062969590272413576, 0.79742698535308732, 0.10128650732345634, 0.10128650732345634),
        (0.062969590272413576, 0.10128650732345634, 0.79742698535308732, 0.10128650732345634),
        (0.062969590272413576, 0.10128650732345634, 0.10128650732345634, 0.79742698535308732),
        (0.066197076394253090, 0.059715871789769820, 0.47014206410511509, 0.47014206410511509),
        (0.066197076394253090, 0.47014206410511509, 0.059715871789769820, 0.47014206410511509),
        (0.066197076394253090, 0.47014206410511509, 0.47014206410511509, 0.059715871789769820),
    ]),
    12: (6, [
        (0.025422453185103408, 0.87382197101699554, 0.063089014491502228, 0.063089014491502228),
        (0.025422453185103408, 0.063089014491502228, 0.87382197101699554, 0.063089014491502228),
        (0.025422453185103408, 0.063089014491502228, 0.063089014491502228, 0.87382197101699554),
        (0.058393137863189683, 0.50142650965817916, 0.24928674517091042, 0.24928674517091042),
        (0.058393137863189683, 0.24928674517091042, 0.50142650965817916, 0.24928674517091042),
        (0.058393137863189683, 0.24928674517091042, 0.24928674517091042, 0.50142650965817916),
        (0.041425537809186788, 0.63650249912139865, 0.053145049844816947, 0.31035245103378441),
        (0.041425537809186788, 0.63650249912139865, 0.31035245103378441, 0.053145049844816947),
        (0.041425537809186788, 0.053145049844816947, 0.63650249912139865, 0.31035245103378441),
        (0.041425537809186788, 0.31035245103378441, 0.63650249912139865, 0.053145049844816947),
        (0.041425537809186788, 0.053145049844816947, 0.31035245103378441, 0.63650249912139865),
        (0.041425537809186788, 0.31035245103378441, 0.053145049844816947, 0.63650249912139865),
    ]),
    16: (8, [
        (0.072157803838893584, 0.33333333333333333, 0.33333333333333333, 0.33333333333333333),
        (0.047545817133642312, 0.081414823414553688, 0.45929258829272316, 0.45929258829272316),
        (0.047545817133642312, 0.45929258829272316, 0.081414823414553688, 0.45929258829272316),
        (0.047545817133642312, 0.45929258829272316, 0.45929258829272316, 0.081414823414553688),
        (0.051608685267359125, 0.65886138449647959, 0.17056930775176021, 0.17056930775176021),
        (0.051608685267359125, 0.17056930775176021, 0.65886138449647959, 0.17056930775176021),
        (0.051608685267359125, 0.17056930775176021, 0.17056930775176021, 0.65886138449647959),
        (0.016229248811599040, 0.89890554336593805, 0.050547228317030975, 0.050547228317030975),
        (0.016229248811599040, 0.050547228317030975, 0.89890554336593805, 0.050547228317030975),
        (0.016229248811599040, 0.050547228317030975, 0.050547228317030975, 0.89890554336593805),
        (0.013615157087217497, 0.72849239295540428, 0.0083947774099576053, 0.26311282963463811),
        (0.013615157087217497, 0.72849239295540428, 0.26311282963463811, 0.0083947774099576053),
        (0.013615157087217497, 0.0083947774099576053, 0.72849239295540428, 0.26311282963463811),
        (0.013615157087217497, 0.26311282963463811, 0.72849239295540428, 0.0083947774099576053),
        (0.013615157087217497, 0.0083947774099576053, 0.26311282963463811, 0.72849239295540428),
        (0.013615157087217497, 0.26311282963463811, 0.0083947774099576053, 0.72849239295540428),
    ]),
    25: (10, [
        (0.045408995191376790, 0.33333333333333333, 0.33333333333333333, 0.33333333333333333),
        (0.018362978878233352, 0.028844733232685245, 0.48557763338365738, 0.48557763338365738),
        (0.018362978878233352, 0.48557763338365738, 0.028844733232685245, 0.48557763338365738),
        (0.018362978878233352, 0.48557763338365738, 0.48557763338365738, 0.028844733232685245),
        (0.022660529717763967, 0.78103684902992589, 0.10948157548503705, 0.10948157548503705),
        (0.022660529717763967, 0.10948157548503705, 0.78103684902992589, 0.10948157548503705),
        (0.022660529717763967, 0.10948157548503705, 0.10948157548503705, 0.78103684902992589),
        (0.036378958422710054, 0.55035294182099910, 0.14170721941487995, 0.30793983876412095),
        (0.036378958422710054, 0.55035294182099910, 0.30793983876412095, 0.14170721941487995),
        (0.036378958422710054, 0.14170721941487995, 0.55035294182099910, 0.30793983876412095),
        (0.036378958422710054, 0.30793983876412095, 0.55035294182099910, 0.14170721941487995),
        (0.036378958422710054, 0.14170721941487995, 0.30793983876412095, 0.55035294182099910),
        (0.036378958422710054, 0.30793983876412095, 0.14170721941487995, 0.55035294182099910),
        (0.014163621265528742, 0.72832390459741092, 0.025003534762686386, 0.24667256063990269),
        (0.014163621265528742, 0.72832390459741092, 0.24667256063990269, 0.025003534762686386),
        (0.014163621265528742, 0.025003534762686386, 0.72832390459741092, 0.24667256063990269),
        (0.014163621265528742, 0.24667256063990269, 0.72832390459741092, 0.025003534762686386),
        (0.014163621265528742, 0.025003534762686386, 0.24667256063990269, 0.72832390459741092),
        (0.014163621265528742, 0.24667256063990269, 0.025003534762686386, 0.72832390459741092),
        (0.0047108334818664117, 0.92365593358750028, 0.0095408154002994576, 0.066803251012200266),
        (0.0047108334818664117, 0.92365593358750028, 0.066803251012200266, 0.0095408154002994576),
        (0.0047108334818664117, 0.0095408154002994576, 0.92365593358750028, 0.066803251012200266),
        (0.0047108334818664117, 0.066803251012200266, 0.92365593358750028, 0.0095408154002994576),
        (0.0047108334818664117, 0.0095408154002994576, 0.066803251012200266, 0.92365593358750028),
        (0.0047108334818664117, 0.066803251012200266, 0.0095408154002994576, 0.92365593358750028),
    ]),
    42: (14, [
        (0.010941790684714445, 0.022072179275642723, 0.48896391036217864, 0.48896391036217864),
        (0.010941790684714445, 0.48896391036217864, 0.022072179275642723, 0.48896391036217864),
        (0.010941790684714445, 0.48896391036217864, 0.48896391036217864, 0.022072179275642723),
        (0.016394176772062675, 0.16471056131909215, 0.41764471934045392, 0.41764471934045392),
        (0.016394176772062675, 0.41764471934045392, 0.16471056131909215, 0.41764471934045392),
        (0.016394176772062675, 0.41764471934045392, 0.41764471934045392, 0.16471056131909215),
        (0.025887052253645793, 0.45304494338232268, 0.27347752830883866, 0.27347752830883866),
        (0.025887052253645793, 0.27347752830883866, 0.45304494338232268, 0.27347752830883866),
        (0.025887052253645793, 0.27347752830883866, 0.27347752830883866, 0.45304494338232268),
        (0.021081294368496509, 0.64558893517491313, 0.17720553241254344, 0.17720553241254344),
        (0.021081294368496509, 0.17720553241254344, 0.64558893517491313, 0.17720553241254344),
        (0.021081294368496509, 0.17720553241254344, 0.17720553241254344, 0.64558893517491313),
        (0.0072168498348883338, 0.87640023381825480, 0.061799883090872601, 0.061799883090872601),
        (0.0072168498348883338, 0.061799883090872601, 0.87640023381825480, 0.061799883090872601),
        (0.0072168498348883338, 0.061799883090872601, 0.061799883090872601, 0.87640023381825480),
        (0.0024617018012000408, 0.96121807750259790, 0.019390961248701048, 0.019390961248701048),
        (0.0024617018012000408, 0.019390961248701048, 0.96121807750259790, 0.019390961248701048),
        (0.0024617018012000408, 0.019390961248701048, 0.019390961248701048, 0.96121807750259790),
        (0.012332876606281837, 0.77060855477499648, 0.057124757403647939, 0.17226668782135558),
        (0.012332876606281837, 0.77060855477499648, 0.17226668782135558, 0.057124757403647939),
        (0.012332876606281837, 0.057124757403647939, 0.77060855477499648, 0.17226668782135558),
        (0.012332876606281837, 0.17226668782135558, 0.77060855477499648, 0.057124757403647939),
        (0.012332876606281837, 0.057124757403647939, 0.17226668782135558, 0.77060855477499648),
        (0.012332876606281837, 0.17226668782135558, 0.057124757403647939, 0.77060855477499648),
        (0.019285755393530342, 0.57022229084668317, 0.092916249356971825, 0.33686145979634500),
        (0.019285755393530342, 0.57022229084668317, 0.33686145979634500, 0.092916249356971825),
        (0.019285755393530342, 0.092916249356971825, 0.57022229084668317, 0.33686145979634500),
        (0.019285755393530342, 0.33686145979634500, 0.57022229084668317, 0.092916249356971825),
        (0.019285755393530342, 0.092916249356971825, 0.33686145979634500, 0.57022229084668317),
        (0.019285755393530342, 0.33686145979634500, 0.092916249356971825, 0.57022229084668317),
        (0.0072181540567669202, 0.68698016780808784, 0.014646950055654410, 0.29837288213625775),
        (0.0072181540567669202, 0.68698016780808784, 0.29837288213625775, 0.014646950055654410),
        (0.0072181540567669202, 0.014646950055654410, 0.68698016780808784, 0.29837288213625775),
        (0.0072181540567669202, 0.29837288213625775, 0.68698016780808784, 0.014646950055654410),
        (0.0072181540567669202, 0.014646950055654410, 0.29837288213625775, 0.68698016780808784),
        (0.0072181540567669202, 0.29837288213625775, 0.014646950055654410, 0.68698016780808784),
        (0.0025051144192503359, 0.87975717137017113, 0.0012683309328720251, 0.11897449769695685),
        (0.0025051144192503359, 0.87975717137017113, 0.11897449769695685, 0.0012683309328720251),
        (0.0025051144192503359, 0.0012683309328720251, 0.87975717137017113, 0.11897449769695685),
        (0.0025051144192503359, 0.11897449769695685, 0.87975717137017113, 0.0012683309328720251),
        (0.0025051144192503359, 0.0012683309328720251, 0.11897449769695685, 0.87975717137017113),
        (0.0025051144192503359, 0.11897449769695685, 0.0012683309328720251, 0.87975717137017113),
    ]),
}

