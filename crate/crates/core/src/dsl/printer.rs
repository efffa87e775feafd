use std::fmt::Write;

use crate::crn::{NetworkSpec, RateModulator, Reaction, SpeciesId};

/// Shortest decimal text that parses back to exactly `v`.
pub fn format_rate(v: f64) -> String {
    if v != 0.0 && (v.abs() < 1e-4 || v.abs() >= 1e16) {
        format!("{v:e}")
    } else {
        format!("{v}")
    }
}

fn side(spec: &NetworkSpec, ids: &[SpeciesId]) -> String {
    ids.iter().map(|&s| spec.name(s)).collect::<Vec<_>>().join(" + ")
}

fn arrow_line(spec: &NetworkSpec, lhs: &[SpeciesId], arrow: &str, rhs: &[SpeciesId]) -> String {
    let l = side(spec, lhs);
    let r = side(spec, rhs);
    let mut s = String::new();
    if !l.is_empty() {
        s.push_str(&l);
        s.push(' ');
    }
    s.push_str(arrow);
    if !r.is_empty() {
        s.push(' ');
        s.push_str(&r);
    }
    s
}

fn is_reverse_pair(a: &Reaction, b: &Reaction) -> bool {
    a.modulator().is_none()
        && b.modulator().is_none()
        && a.reactants() == b.products()
        && a.products() == b.reactants()
}

/// Canonical text of `spec`: every species declared in id order, then the
/// reactions in order, with adjacent forward/reverse pairs written as `<->`.
///
/// Hill modulators cannot be expressed in the format and are emitted as a
/// trailing comment, so networks carrying them do not round-trip.
pub fn print_network(spec: &NetworkSpec) -> String {
    let mut out = String::new();
    for s in spec.species() {
        let _ = write!(out, "species {} = {}", s.name, spec.initial_counts()[s.id.0]);
        if spec.is_clamped(s.id) {
            out.push_str(" clamped");
        }
        out.push('\n');
    }
    if !spec.species().is_empty() && !spec.reactions().is_empty() {
        out.push('\n');
    }
    let rs = spec.reactions();
    let mut i = 0;
    while i < rs.len() {
        let r = &rs[i];
        if i + 1 < rs.len() && is_reverse_pair(r, &rs[i + 1]) {
            let line = arrow_line(spec, r.reactants(), "<->", r.products());
            let _ = writeln!(out, "{line} @ {}, {}", format_rate(r.rate()), format_rate(rs[i + 1].rate()));
            i += 2;
            continue;
        }
        let line = arrow_line(spec, r.reactants(), "->", r.products());
        let _ = write!(out, "{line} @ {}", format_rate(r.rate()));
        if let Some(RateModulator::Hill {
            ligand,
            theta,
            exponent,
            gain,
        }) = r.modulator()
        {
            let _ = write!(
                out,
                " # hill({}; theta={}, exponent={}, gain={})",
                spec.name(*ligand),
                format_rate(*theta),
                format_rate(*exponent),
                format_rate(*gain)
            );
        }
        out.push('\n');
        i += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_network;

    #[test]
    fn rates_round_trip() {
        for v in [0.0, 1.0, 0.1, 1e-6, 0.0003, 5e-324, 1.7976931348623157e308, 123456.789, 1.0 / 3.0] {
            assert_eq!(format_rate(v).parse::<f64>().unwrap(), v);
        }
        assert_eq!(format_rate(1e-6), "1e-6");
        assert_eq!(format_rate(0.5), "0.5");
    }

    #[test]
    fn empty_spec_prints_nothing() {
        assert_eq!(print_network(&NetworkSpec::builder().build()), "");
    }

    #[test]
    fn lone_species() {
        let mut b = NetworkSpec::builder();
        b.add_species("X", 3).unwrap();
        assert_eq!(print_network(&b.build()), "species X = 3\n");
    }

    #[test]
    fn pairs_collapse_to_bidirectional() {
        let text = "species A = 1\nspecies B = 0\n\nA <-> B @ 0.1, 1e-6\nB -> @ 2\n";
        let spec = parse_network(text).unwrap();
        assert_eq!(print_network(&spec), text);
    }

    #[test]
    fn dimerisation_repeats_the_name() {
        let spec = parse_network("A + A -> A2 @ 0.5").unwrap();
        assert!(print_network(&spec).contains("A + A -> A2 @ 0.5"));
    }
}
