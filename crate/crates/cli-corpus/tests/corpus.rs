use cli_corpus::{family, template, ENTRIES, FAMILIES, TEMPLATES};
use pcsp_model::{check_polymorphism, plant_satisfiable_instance, verify_assignment, PromiseTemplate, Side, TemplateDoc};
use rounding_pipelines::{solve, Family, FamilyDoc};

fn verdict(t: &PromiseTemplate, f: &Family, l: usize) -> bool {
    let member = f.member(l).unwrap();
    check_polymorphism(t, &member, &f.blocks(l)).unwrap().is_verified()
}

#[test]
fn sound_entries_hold_at_every_small_arity() {
    for e in ENTRIES.iter().filter(|e| e.sound) {
        let (t, f) = (template(e.template).unwrap(), family(e.family).unwrap());
        for l in f.arities().range(f.block_count() as u64, 9) {
            assert!(verdict(&t, &f, l as usize), "{} / {} at L = {l}", e.template, e.family);
        }
    }
}

#[test]
fn unsound_entries_fail_somewhere() {
    let maj = family("fam-maj").unwrap();
    let t = template("two-plus-eps-sat").unwrap();
    assert!(verdict(&t, &maj, 3));
    assert!(!verdict(&t, &maj, 5));
    let sum = family("fam-rainbow-sum").unwrap();
    let t = template("rainbow3").unwrap();
    assert!(verdict(&t, &sum, 1));
    assert!(!verdict(&t, &sum, 3));
}

#[test]
fn sound_entries_solve_their_planted_instances() {
    for e in ENTRIES.iter().filter(|e| e.sound) {
        let (t, f) = (template(e.template).unwrap(), family(e.family).unwrap());
        for seed in 1..=3 {
            let (inst, witness) = plant_satisfiable_instance(&t, 15, 25, seed).unwrap();
            assert!(verify_assignment(&t, &inst, &witness).unwrap().is_satisfied());
            let out = solve(&t, &inst, &f).unwrap();
            let sol = out.solution().unwrap_or_else(|| panic!("{} / {} rejected seed {seed}", e.template, e.family));
            assert_eq!(sol.assignment.side, Side::Q);
            assert!(verify_assignment(&t, &inst, &sol.assignment).unwrap().is_satisfied(), "{} seed {seed}", e.template);
        }
    }
}

#[test]
fn documents_round_trip() {
    for name in TEMPLATES {
        let t = template(name).unwrap();
        let doc = TemplateDoc::from(&t);
        let text = serde_json::to_string(&doc).unwrap();
        let back: TemplateDoc = serde_json::from_str(&text).unwrap();
        assert_eq!(back, doc);
        assert_eq!(PromiseTemplate::try_from(back).unwrap(), t, "{name}");
    }
    for name in FAMILIES {
        let f = family(name).unwrap();
        let doc = FamilyDoc::from(&f);
        let back: FamilyDoc = serde_json::from_str(&serde_json::to_string(&doc).unwrap()).unwrap();
        assert_eq!(back, doc);
        assert_eq!(Family::try_from(&back).unwrap(), f, "{name}");
    }
}
