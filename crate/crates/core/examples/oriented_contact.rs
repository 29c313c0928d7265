//! Oriented spheres on the Lie quadric: coordinates, contact, the tangential
//! invariant and the pencil of spheres through a contact element.

use laguerre::spheres::{
    classify_coord, contact_from_line, lie_line, oriented_contact, pencil_member, sphere_coord,
    tangential_invariant, Classified, ContactElement, SphereElement,
};
use laguerre::Result;

fn main() -> Result<()> {
    let unit = SphereElement::sphere(vec![0.0; 3], 1.0)?;
    let touching = SphereElement::sphere(vec![3.0, 0.0, 0.0], -2.0)?;
    let nested = SphereElement::sphere(vec![0.0; 3], 2.0)?;

    for (name, other) in [("S((3,0,0), -2)", &touching), ("S(0, 2)", &nested)] {
        println!(
            "S(0, 1) vs {name}: contact = {}, F = {}",
            oriented_contact(&unit, other, 1e-12)?,
            tangential_invariant(&unit, other)?
        );
    }

    let gamma = sphere_coord(&touching);
    println!("coordinate of S((3,0,0), -2): {:?}", gamma.representative().as_slice());
    if let Classified::Element(back) = classify_coord(&gamma, 1e-10)? {
        println!("classified back: {back:?}");
    }

    // every member of the pencil touches the element
    let c = ContactElement::new(vec![1.0, 2.0, 0.5], vec![0.0, 0.6, 0.8])?;
    let line = lie_line(&c);
    for t in [-1.0, 0.0, 0.5, 2.0] {
        let member = pencil_member(&c, t);
        println!("pencil t = {t:4}: ⟨γ, γ⟩ = {:+.1e}", member.norm_sq());
    }
    println!("contact element recovered from its line: {:?}", contact_from_line(&line)?);
    Ok(())
}
