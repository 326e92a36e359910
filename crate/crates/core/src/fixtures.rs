//! Small named diagrams used throughout the tests and the acceptance suite.

use crate::diagram::{parse_diagram, CoxeterDiagram, DiagramBuilder, Label};

fn parse(text: &str) -> CoxeterDiagram {
    parse_diagram(text).expect("fixture parses")
}

/// Path `a - b - c` with labels 3, 3 (the symmetric group S4).
pub fn a3() -> CoxeterDiagram {
    parse("vertices a b c\nedge a b 3\nedge b c 3\n")
}

/// A single infinite edge: the infinite dihedral group.
pub fn atilde1() -> CoxeterDiagram {
    parse("vertices a b\nedge a b inf\n")
}

/// Triangle with all labels 3.
pub fn atilde2() -> CoxeterDiagram {
    parse("vertices a b c\nedge a b 3\nedge b c 3\nedge a c 3\n")
}

/// Triangle with labels 3, 3, 4: compact hyperbolic.
pub fn triangle_334() -> CoxeterDiagram {
    parse("vertices a b c\nedge a b 3\nedge b c 3\nedge a c 4\n")
}

/// Triangle with all labels infinite: the free product of three copies of Z/2.
pub fn free_triangle() -> CoxeterDiagram {
    parse("vertices x y z\nedge x y inf\nedge y z inf\nedge x z inf\n")
}

/// Right-angled pentagon group: cyclically adjacent generators commute,
/// all other pairs generate infinite dihedral groups.
pub fn pentagon() -> CoxeterDiagram {
    racg_cycle(5, "v", 1)
}

/// The infinite dihedral group times the free triangle group.
pub fn dinf_x_triangle() -> CoxeterDiagram {
    parse("vertices u v x y z\nedge u v inf\nedge x y inf\nedge y z inf\nedge x z inf\n")
}

/// Two commuting infinite dihedral groups.
pub fn dinf_x_dinf() -> CoxeterDiagram {
    parse("vertices a b c d\nedge a b inf\nedge c d inf\n")
}

/// Triangle of 3s with a pendant vertex (a non-compact hyperbolic simplex
/// group) times an infinite dihedral group.
pub fn paracompact_x_dinf() -> CoxeterDiagram {
    parse(
        "vertices a b c d u v\n\
         edge a b 3\nedge b c 3\nedge a c 3\nedge a d 3\nedge u v inf\n",
    )
}

/// Right-angled group on `n` generators where cyclically adjacent vertices
/// commute and every other pair is free. Names are `{prefix}{first}`,
/// `{prefix}{first + 1}`, ...
pub fn racg_cycle(n: usize, prefix: &str, first: usize) -> CoxeterDiagram {
    let names: Vec<String> = (0..n).map(|i| format!("{prefix}{}", i + first)).collect();
    let mut b = DiagramBuilder::new().vertices(&names).expect("valid names");
    for i in 0..n {
        for j in (i + 1)..n {
            let adjacent = j - i == 1 || (i == 0 && j == n - 1);
            if !adjacent {
                b.edge(&names[i], &names[j], Label::Infinity).unwrap();
            }
        }
    }
    b.build()
}
