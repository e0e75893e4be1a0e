use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use wicks::group::GroupOracle;
use wicks::thin::{build_subdivision, companion_report, GeodesicPolygon};
use wicks::word::{reduced_words, w, Word};

fn closing_polygon(o: &GroupOracle, rest: &[Word]) -> Option<GeodesicPolygon> {
    let base = o.normal_form(&Word::join(rest).inverse()).ok()?;
    if base.len() < 2 {
        return None;
    }
    let mut sides = vec![base];
    sides.extend(rest.iter().cloned());
    GeodesicPolygon::new(o, sides).ok()
}

#[test]
fn leaves_spell_the_polygon() {
    let o = GroupOracle::free(2);
    let p = GeodesicPolygon::new(&o, vec![w("aab"), w("B"), w("Ab"), w("BA")]).unwrap();
    let s = build_subdivision(&o, &p).unwrap();
    let leaves: Vec<Word> = s.leaves().map(|n| n.label.clone()).collect();
    assert_eq!(Word::join(&leaves), Word::join(&p.sides()[1..]));
    assert_eq!(s.node("").label, p.sides()[0].inverse());
    assert_eq!((s.k, s.pads), (2, 1));
}

#[test]
fn tree_companions_coincide() {
    let o = GroupOracle::free(2);
    let short: Vec<Word> = (1..=2).flat_map(|l| reduced_words(2, l)).collect();
    for a in &short {
        for b in &short {
            for c in &short {
                if let Some(p) = closing_polygon(&o, &[a.clone(), b.clone(), c.clone()]) {
                    let r = companion_report(&o, &p, 0).unwrap();
                    assert!(r.holds, "{:?}: {:?}", p.sides(), r.violations);
                    assert_eq!((r.max_dist, r.max_inner_dist), (0, 0));
                }
            }
        }
    }
}

#[test]
fn surface_companions_respect_the_bounds() {
    let o = GroupOracle::surface(2);
    let sides: Vec<Word> = o.geodesic_words(3).unwrap().into_iter().filter(|s| !s.is_empty()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut checked = 0;
    while checked < 40 {
        let n = 2 + checked % 4;
        let rest: Vec<Word> = (0..n).map(|_| sides.choose(&mut rng).unwrap().clone()).collect();
        if let Some(p) = closing_polygon(&o, &rest) {
            let r = companion_report(&o, &p, 4).unwrap();
            assert!(r.holds, "{:?}: {:?}", p.sides(), r.violations);
            assert!(r.max_dist as f64 <= r.bound && r.max_inner_dist as f64 <= r.inner_bound);
            checked += 1;
        }
    }
}

#[test]
fn polygons_must_close() {
    let o = GroupOracle::free(2);
    assert!(GeodesicPolygon::new(&o, vec![w("ab"), w("a")]).is_err());
    assert!(GeodesicPolygon::new(&o, vec![w("aA"), w("1")]).is_err());
}
