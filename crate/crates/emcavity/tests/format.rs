use emcavity::format::{read_field, write_field, Field, FormatError};
use emcavity_core::{CVec3, Complex64, ScalarField, SpacetimeGrid, VectorField3};
use proptest::prelude::*;

fn grid_strategy() -> impl Strategy<Value = SpacetimeGrid> {
    (3usize..6, 3usize..6, 3usize..6, 1usize..3, -2.0f64..2.0, 0.01f64..1.0).prop_map(|(a, b, c, nt, o, h)| {
        SpacetimeGrid::new([o, -o, 0.5 * o], [a, b, c], h, 0.25, 0.5, nt).unwrap()
    })
}

fn bytes(field: &Field) -> Vec<u8> {
    let mut buf = Vec::new();
    write_field(&mut buf, field, Some("f")).unwrap();
    buf
}

proptest! {
    #[test]
    fn scalar_round_trip(grid in grid_strategy(), seed in any::<u32>()) {
        let f = ScalarField::sample(grid, |t, x| Complex64::new(x[0] * seed as f64 + t, x[2] - 1e-300)).unwrap();
        let (header, back) = read_field(bytes(&Field::Scalar(f.clone())).as_slice()).unwrap();
        prop_assert_eq!(header.name.as_deref(), Some("f"));
        let back = back.into_scalar().unwrap();
        prop_assert_eq!(back.grid(), f.grid());
        prop_assert_eq!(back.values(), f.values());
    }

    #[test]
    fn vector_round_trip_and_truncation(grid in grid_strategy(), cut in 1usize..40) {
        let f = VectorField3::sample(grid, |t, x| CVec3::from_parts(x, [t, f64::MIN_POSITIVE, -0.0])).unwrap();
        let buf = bytes(&Field::Vector(f.clone()));
        let back = read_field(buf.as_slice()).unwrap().1.into_vector().unwrap();
        prop_assert_eq!(back.values(), f.values());

        let short = &buf[..buf.len() - cut.min(buf.len() - 1)];
        prop_assert!(read_field(short).is_err());
        let mut long = buf.clone();
        long.push(0);
        prop_assert!(matches!(read_field(long.as_slice()), Err(FormatError::Trailing)));
    }
}

#[test]
fn wrong_kind_and_bad_headers_are_rejected() {
    let grid = SpacetimeGrid::new([0.0; 3], [3, 3, 3], 1.0, 0.0, 1.0, 1).unwrap();
    let buf = bytes(&Field::Scalar(ScalarField::zeros(grid)));
    assert!(matches!(
        read_field(buf.as_slice()).unwrap().1.into_vector(),
        Err(FormatError::Kind { expected: "vector", found: "scalar" })
    ));
    let text = String::from_utf8_lossy(&buf).replace("emcavity-field", "emcavity-fluid");
    assert!(matches!(read_field(text.as_bytes()), Err(FormatError::Magic(_))));
    let header = buf.iter().position(|&b| b == b'\n').unwrap();
    let v2 = String::from_utf8(buf[..header].to_vec()).unwrap().replace("\"version\":1", "\"version\":2") + "\n";
    assert!(matches!(read_field(v2.as_bytes()), Err(FormatError::Version(2))));
    assert!(matches!(read_field(&b"{\"format\":"[..]), Err(FormatError::HeaderLine)));
}
