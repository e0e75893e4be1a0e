use std::collections::BTreeSet;

use wicks::enumerate::{canonical_form, enumerate_wicks_forms};
use wicks::quadratic::{is_wicks_form, orientable_words, OrientableWord};
use wicks::surface::build_surface_graph;
use wicks::word::{canonical_cyclic, w};

#[test]
fn euler_numerator_is_even_and_non_negative() {
    for e in 1..=5 {
        for u in orientable_words(e) {
            let g = build_surface_graph(&OrientableWord::new(u.clone()).unwrap());
            let num = 1 + g.edge_count() as i64 - g.vertex_count as i64;
            assert!(num >= 0 && num % 2 == 0, "{u}: v={} e={}", g.vertex_count, g.edge_count());
            assert_eq!(g.genus(), Some(num as usize / 2));
        }
    }
}

#[test]
fn circuit_label_is_a_rotation_of_the_word() {
    for e in 1..=4 {
        for u in orientable_words(e) {
            let g = build_surface_graph(&OrientableWord::new(u.clone()).unwrap());
            assert_eq!(canonical_cyclic(&g.circuit_label()), canonical_cyclic(&u));
            assert!(g.circuit.regular);
        }
    }
}

#[test]
fn wicks_forms_have_no_low_degree_vertices() {
    for e in 1..=5 {
        for u in orientable_words(e) {
            let ow = OrientableWord::new(u.clone()).unwrap();
            let g = build_surface_graph(&ow);
            if is_wicks_form(&u) {
                assert!(g.min_degree() >= 3, "{u}");
            }
            assert_eq!(g.vertex_count, ow.vertex_count());
        }
    }
}

#[test]
fn graph_data_of_small_words() {
    for (s, v, e, genus) in [("aA", 2, 1, 0), ("abAB", 1, 2, 1), ("abcABC", 2, 3, 1)] {
        let g = build_surface_graph(&OrientableWord::parse(s).unwrap());
        assert_eq!((g.vertex_count, g.edge_count(), g.genus()), (v, e, Some(genus)), "{s}");
    }
}

#[test]
fn genus_one_forms_stop_at_length_six() {
    let forms = enumerate_wicks_forms(1, Some(8)).unwrap();
    let classes: BTreeSet<_> = forms.iter().map(|f| canonical_form(f.base.word())).collect();
    let expected: BTreeSet<_> = [w("abAB"), w("abcABC")].iter().map(canonical_form).collect();
    assert_eq!(classes, expected);
    assert!(forms.iter().all(|f| f.base.len() <= 6));
}

#[test]
fn enumeration_agrees_with_a_filtered_sweep() {
    let mut sweep = BTreeSet::new();
    for e in 1..=5 {
        for u in orientable_words(e) {
            if is_wicks_form(&u) && OrientableWord::new(u.clone()).unwrap().genus() == 2 {
                sweep.insert(canonical_form(&u));
            }
        }
    }
    let enumerated: BTreeSet<_> =
        enumerate_wicks_forms(2, Some(10)).unwrap().iter().map(|f| canonical_form(f.base.word())).collect();
    assert_eq!(enumerated, sweep);
}
