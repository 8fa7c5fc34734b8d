//! File formats, scene generators and SVG rendering behind the `discplan`
//! command.

pub mod gen;
pub mod io;
pub mod render;
