pub mod free_space;
pub mod geom;
pub mod interference;
pub mod motion_graph;
pub mod pebble;
pub mod planner;
pub mod region;
pub mod validator;
