use cv_gksl::io::{generator_from_json, generator_to_json};
use cv_gksl::prelude::*;

fn main() -> Result<()> {
    let gen = build_generator(&GravityScenario::reference(ModelKind::Naive))?;
    let text = generator_to_json(&gen)?;
    println!("{text}");
    let back = generator_from_json(&text)?;
    println!("round trip exact: {}", back == gen);
    Ok(())
}
