#include <egx/ilp.hpp>

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

namespace egx
{

std::string Variable::name() const
{
  switch ( kind )
  {
  case VarKind::select:
    return "s_" + std::to_string( index );
  case VarKind::active:
    return "a_" + std::to_string( index );
  case VarKind::opp:
    return "o_" + std::to_string( index );
  case VarKind::level:
    return "l_" + std::to_string( index );
  }
  return "?";
}

std::optional<std::uint32_t> IlpModel::find( Variable v ) const { return find( v.name() ); }

std::optional<std::uint32_t> IlpModel::find( std::string const& name ) const
{
  if ( auto it = by_name_.find( name ); it != by_name_.end() )
    return it->second;
  return std::nullopt;
}

std::uint32_t IlpModel::index_of( Variable v ) const
{
  if ( auto i = find( v ) )
    return *i;
  throw ilp_error( "model has no variable " + v.name() );
}

std::vector<std::vector<Constraint> const*> IlpModel::families() const
{
  return { &eq5b, &eq5c, &eq5d, &eq5e, &eq5f, &eq5g, &link };
}

std::size_t IlpModel::num_constraints() const
{
  std::size_t total = 0;
  for ( auto const* family : families() )
    total += family->size();
  return total;
}

std::optional<std::string> IlpModel::first_violation( std::vector<double> const& values, double tolerance ) const
{
  if ( values.size() != variables.size() )
    return std::string( "assignment size mismatch" );

  for ( std::uint32_t v = 0; v < variables.size(); ++v )
  {
    auto const x = values[v];
    if ( variables[v].kind == VarKind::level )
    {
      if ( x < -tolerance || x > static_cast<double>( num_classes ) + tolerance )
        return "bound " + variables[v].name();
    }
    else if ( std::abs( x ) > tolerance && std::abs( x - 1.0 ) > tolerance )
      return "binary " + variables[v].name();
  }

  for ( auto const* family : families() )
    for ( auto const& row : *family )
    {
      double lhs = 0;
      for ( auto const& t : row.terms )
        lhs += static_cast<double>( t.coef ) * values[t.var];
      auto const rhs = static_cast<double>( row.rhs );
      bool ok = true;
      switch ( row.sense )
      {
      case Sense::le:
        ok = lhs <= rhs + tolerance;
        break;
      case Sense::ge:
        ok = lhs >= rhs - tolerance;
        break;
      case Sense::eq:
        ok = std::abs( lhs - rhs ) <= tolerance;
        break;
      }
      if ( !ok )
        return row.name;
    }
  return std::nullopt;
}

double IlpModel::objective_value( std::vector<double> const& values ) const
{
  double total = 0;
  for ( auto const& t : objective )
    total += static_cast<double>( t.coef ) * values[t.var];
  return total;
}

IlpModel build_ilp( EGraph const& egraph, PruneMask const* mask, ExtractionResult const* warm )
{
  IlpModel model;
  model.num_classes = egraph.num_classes();
  model.big_m = static_cast<std::int64_t>( egraph.num_classes() ) + 1;

  // A class is dead when the mask says so or when none of its nodes can bottom out:
  // every member is self-cyclic or needs a dead class.
  std::vector<bool> dead( egraph.num_classes(), false );
  for ( ClassId c = 0; c < egraph.num_classes(); ++c )
    dead[c] = mask && mask->is_dead( c );
  for ( bool changed = true; changed; )
  {
    changed = false;
    for ( ClassId c = 0; c < egraph.num_classes(); ++c )
    {
      if ( dead[c] )
        continue;
      bool any = false;
      for ( auto n : egraph.members( c ) )
      {
        bool ok = !egraph.is_self_cyclic( n );
        for ( auto k : egraph.child_classes( n ) )
          ok = ok && !dead[k];
        any = any || ok;
      }
      if ( !any )
        dead[c] = changed = true;
    }
  }
  auto const is_dead = [&]( ClassId c ) { return static_cast<bool>( dead[c] ); };
  for ( auto r : egraph.roots() )
    if ( is_dead( r ) )
      throw ilp_error( "root e-class '" + std::string( egraph.class_name( r ) ) + "' has no selectable node" );

  std::vector<bool> is_free( egraph.num_nodes(), false );
  for ( NodeId n = 0; n < egraph.num_nodes(); ++n )
  {
    if ( is_dead( egraph.class_of( n ) ) )
      continue;
    bool free = !egraph.is_self_cyclic( n ) && !( mask && mask->is_pruned( n ) );
    for ( auto k : egraph.child_classes( n ) )
      free = free && !is_dead( k );
    is_free[n] = free;
    ( free ? model.free_nodes : model.fixed_nodes ).push_back( n );
  }
  for ( ClassId c = 0; c < egraph.num_classes(); ++c )
    if ( !is_dead( c ) )
      model.live_classes.push_back( c );

  auto add_var = [&]( VarKind kind, std::uint32_t index ) {
    auto const id = static_cast<std::uint32_t>( model.variables.size() );
    model.variables.push_back( { kind, index } );
    model.by_name_.emplace( model.variables.back().name(), id );
    return id;
  };

  std::vector<std::uint32_t> s_var( egraph.num_nodes(), 0 ), o_var( egraph.num_nodes(), 0 );
  std::vector<std::uint32_t> a_var( egraph.num_classes(), 0 ), l_var( egraph.num_classes(), 0 );
  for ( NodeId n = 0; n < egraph.num_nodes(); ++n )
    if ( !is_dead( egraph.class_of( n ) ) )
      s_var[n] = add_var( VarKind::select, n );
  for ( auto c : model.live_classes )
    a_var[c] = add_var( VarKind::active, c );
  for ( auto n : model.free_nodes )
    o_var[n] = add_var( VarKind::opp, n );
  for ( auto c : model.live_classes )
    l_var[c] = add_var( VarKind::level, c );

  auto const tag = []( char const* family, std::uint32_t a ) {
    return std::string( family ) + "_" + std::to_string( a );
  };
  auto const tag2 = []( char const* family, std::uint32_t a, std::uint32_t b ) {
    return std::string( family ) + "_" + std::to_string( a ) + "_" + std::to_string( b );
  };

  for ( auto n : model.free_nodes )
    model.objective.push_back( { static_cast<std::int64_t>( egraph.node_cost( n ).value() ), s_var[n] } );

  for ( auto c : model.live_classes )
  {
    Constraint row{ tag( "eq5b", c ), {}, Sense::eq, 0 };
    for ( auto n : egraph.members( c ) )
      if ( is_free[n] )
        row.terms.push_back( { 1, s_var[n] } );
    row.terms.push_back( { -1, a_var[c] } );
    model.eq5b.push_back( std::move( row ) );
  }

  for ( auto n : model.free_nodes )
    for ( auto k : egraph.child_classes( n ) )
      model.eq5c.push_back( { tag2( "eq5c", n, k ), { { 1, s_var[n] }, { -1, a_var[k] } }, Sense::le, 0 } );

  for ( auto r : egraph.roots() )
    model.eq5d.push_back( { tag( "eq5d", r ), { { 1, a_var[r] } }, Sense::eq, 1 } );

  for ( auto n : model.free_nodes )
  {
    auto const j = egraph.class_of( n );
    for ( auto k : egraph.child_classes( n ) )
      if ( k != j )
        model.eq5e.push_back(
            { tag2( "eq5e", n, k ), { { 1, l_var[j] }, { -1, l_var[k] }, { model.big_m, o_var[n] } }, Sense::ge, 1 } );
  }

  for ( auto n : model.free_nodes )
    model.eq5f.push_back( { tag( "eq5f", n ), { { 1, s_var[n] }, { 1, o_var[n] } }, Sense::eq, 1 } );

  for ( auto n : model.fixed_nodes )
    model.eq5g.push_back( { tag( "eq5g", n ), { { 1, s_var[n] } }, Sense::eq, 0 } );

  std::vector<bool> is_root( egraph.num_classes(), false );
  for ( auto r : egraph.roots() )
    is_root[r] = true;
  for ( auto c : model.live_classes )
  {
    if ( is_root[c] )
      continue;
    Constraint row{ tag( "link", c ), { { 1, a_var[c] } }, Sense::le, 0 };
    for ( auto p : egraph.parents( c ) )
      if ( is_free[p] )
        row.terms.push_back( { -1, s_var[p] } );
    model.link.push_back( std::move( row ) );
  }

  if ( warm )
  {
    if ( !warm->valid )
      throw ilp_error( "warm start is not a valid extraction" );
    auto const chosen = restrict_to_reachable( egraph, warm->choices );
    for ( ClassId c = 0; c < egraph.num_classes(); ++c )
      if ( chosen[c] != kNoNode && !is_free[chosen[c]] )
        throw ilp_error( "warm start selects node '" + std::string( egraph.node_name( chosen[c] ) ) +
                         "', which the model excludes" );

    for ( auto n : model.free_nodes )
      model.warm_start.emplace_back( s_var[n], chosen[egraph.class_of( n )] == n ? 1 : 0 );
    for ( auto c : model.live_classes )
      model.warm_start.emplace_back( a_var[c], chosen[c] != kNoNode ? 1 : 0 );
    for ( auto n : model.free_nodes )
      model.warm_start.emplace_back( o_var[n], chosen[egraph.class_of( n )] == n ? 0 : 1 );
  }

  return model;
}

namespace
{

void write_terms( IlpModel const& model, std::vector<Term> const& terms, std::ostream& out )
{
  bool first = true;
  std::size_t on_line = 0;
  for ( auto const& t : terms )
  {
    if ( on_line == 8 )
    {
      out << "\n   ";
      on_line = 0;
    }
    auto const coef = t.coef;
    if ( first )
      out << ( coef < 0 ? "-" : "" );
    else
      out << ( coef < 0 ? " - " : " + " );
    auto const mag = coef < 0 ? -coef : coef;
    if ( mag != 1 )
      out << mag << ' ';
    out << model.variables[t.var].name();
    first = false;
    ++on_line;
  }
  if ( first )
    out << "0";
}

} // namespace

void emit_lp( IlpModel const& model, std::ostream& out )
{
  out << "\\ e-graph extraction model: " << model.variables.size() << " variables, " << model.num_constraints()
      << " constraints\n";
  out << "Minimize\n obj: ";
  if ( model.objective.empty() && !model.variables.empty() )
    out << "0 " << model.variables.front().name();
  else
    write_terms( model, model.objective, out );
  out << "\nSubject To\n";
  for ( auto const* family : model.families() )
    for ( auto const& row : *family )
    {
      out << ' ' << row.name << ": ";
      write_terms( model, row.terms, out );
      out << ( row.sense == Sense::le ? " <= " : row.sense == Sense::ge ? " >= " : " = " ) << row.rhs << '\n';
    }
  out << "Bounds\n";
  for ( auto const& v : model.variables )
    if ( v.kind == VarKind::level )
      out << " 0 <= " << v.name() << " <= " << model.num_classes << '\n';
  out << "Binaries\n";
  std::size_t on_line = 0;
  for ( auto const& v : model.variables )
  {
    if ( v.kind == VarKind::level )
      continue;
    out << ( on_line == 0 ? " " : " " ) << v.name();
    if ( ++on_line == 10 )
    {
      out << '\n';
      on_line = 0;
    }
  }
  if ( on_line != 0 )
    out << '\n';
  out << "End\n";
  if ( !out )
    throw std::runtime_error( "failed writing LP file" );
}

void emit_warmstart( IlpModel const& model, std::ostream& out )
{
  if ( model.warm_start.empty() )
    throw ilp_error( "model has no warm start" );
  for ( auto const& [var, value] : model.warm_start )
    out << model.variables[var].name() << ' ' << value << '\n';
  if ( !out )
    throw std::runtime_error( "failed writing warm-start file" );
}

ExtractionResult parse_solution( IlpModel const& model, EGraph const& egraph, std::istream& in )
{
  std::vector<std::optional<double>> values( model.variables.size() );
  std::string line;
  std::size_t line_no = 0;
  while ( std::getline( in, line ) )
  {
    ++line_no;
    if ( auto hash = line.find( '#' ); hash != std::string::npos )
      line.erase( hash );
    std::istringstream fields( line );
    std::string name, value;
    if ( !( fields >> name ) )
      continue;
    if ( !( fields >> value ) )
      throw ilp_error( "line " + std::to_string( line_no ) + ": expected '<variable> <value>'" );
    auto var = model.find( name );
    if ( !var )
      throw ilp_error( "line " + std::to_string( line_no ) + ": unknown variable '" + name + "'" );
    try
    {
      std::size_t used = 0;
      values[*var] = std::stod( value, &used );
      if ( used != value.size() )
        throw std::invalid_argument( value );
    }
    catch ( std::exception const& )
    {
      throw ilp_error( "line " + std::to_string( line_no ) + ": bad value '" + value + "'" );
    }
  }

  auto const is_one = [&]( std::uint32_t v ) { return values[v] && *values[v] > 0.5; };

  Choices choices( egraph.num_classes(), kNoNode );
  std::vector<bool> active( egraph.num_classes(), false );
  for ( std::uint32_t v = 0; v < model.variables.size(); ++v )
  {
    auto const& var = model.variables[v];
    if ( var.kind == VarKind::active && is_one( v ) )
      active[var.index] = true;
    if ( var.kind != VarKind::select || !is_one( v ) )
      continue;
    auto const c = egraph.class_of( var.index );
    if ( choices[c] != kNoNode )
      throw ilp_error( "e-class '" + std::string( egraph.class_name( c ) ) + "' has more than one selected node" );
    choices[c] = var.index;
  }
  for ( ClassId c = 0; c < egraph.num_classes(); ++c )
    if ( active[c] && choices[c] == kNoNode )
      throw ilp_error( "active e-class '" + std::string( egraph.class_name( c ) ) + "' has no selected node" );

  return make_result( egraph, std::move( choices ) );
}

std::vector<double> assignment_from_extraction( IlpModel const& model, EGraph const& egraph, Choices const& choices )
{
  auto const chosen = restrict_to_reachable( egraph, choices );

  // heights over the chosen term DAG, children first
  std::vector<double> height( egraph.num_classes(), 0.0 );
  std::vector<std::uint8_t> state( egraph.num_classes(), 0 );
  std::vector<std::pair<ClassId, std::uint32_t>> stack;
  for ( ClassId start = 0; start < egraph.num_classes(); ++start )
  {
    if ( chosen[start] == kNoNode || state[start] )
      continue;
    stack.emplace_back( start, 0 );
    state[start] = 1;
    while ( !stack.empty() )
    {
      auto& [c, next] = stack.back();
      auto kids = egraph.child_classes( chosen[c] );
      if ( next < kids.size() )
      {
        auto const k = kids[next++];
        if ( state[k] == 0 && chosen[k] != kNoNode )
        {
          state[k] = 1;
          stack.emplace_back( k, 0 );
        }
        continue;
      }
      for ( auto k : kids )
        height[c] = std::max( height[c], height[k] + 1.0 );
      state[c] = 2;
      stack.pop_back();
    }
  }

  std::vector<double> values( model.variables.size(), 0.0 );
  for ( std::uint32_t v = 0; v < model.variables.size(); ++v )
  {
    auto const& var = model.variables[v];
    switch ( var.kind )
    {
    case VarKind::select:
      values[v] = chosen[egraph.class_of( var.index )] == var.index ? 1.0 : 0.0;
      break;
    case VarKind::opp:
      values[v] = chosen[egraph.class_of( var.index )] == var.index ? 0.0 : 1.0;
      break;
    case VarKind::active:
      values[v] = chosen[var.index] != kNoNode ? 1.0 : 0.0;
      break;
    case VarKind::level:
      values[v] = height[var.index];
      break;
    }
  }
  return values;
}

} // namespace egx
