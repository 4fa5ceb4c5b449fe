#include "varscope/region_tree.hpp"

#include "varscope/macros.hpp"
#include "varscope/text.hpp"

namespace varscope {

RegionBuilder::RegionBuilder(PresenceCondition root_pc, const std::vector<LogicalLine>& lines, std::string file,
                             Diagnostics& diags)
    : file_(std::move(file)), diags_(diags), lines_(lines) {
  ConditionalRegion root;
  root.effective_pc = std::move(root_pc);
  root.end = lines.size();
  tree_.regions.push_back(std::move(root));
  tree_.line_region.assign(lines.size(), 0);
  stack_.push_back(Open{});
}

int RegionBuilder::physical(std::size_t line) const {
  return line < lines_.size() ? lines_[line].physical_span.start : 0;
}

const PresenceCondition& RegionBuilder::current_pc() const {
  return tree_.regions[static_cast<std::size_t>(current())].effective_pc;
}

PresenceCondition RegionBuilder::elif_context() const {
  const auto& g = stack_.back();
  if (!in_group()) return current_pc();
  auto conds = g.conds;
  conds.emplace_back(std::nullopt);
  return make_and({tree_.regions[static_cast<std::size_t>(g.parent)].effective_pc,
                   derive_branch_condition(conds, conds.size() - 1)});
}

int RegionBuilder::add_branch(Open& g, std::size_t directive_line, std::optional<std::string> text,
                              std::optional<PresenceCondition> cond, bool discarded) {
  ConditionalRegion r;
  r.id = static_cast<int>(tree_.regions.size());
  r.group_id = g.group_id;
  r.branch_index = g.branches++;
  r.own_condition = std::move(text);
  r.own_pc = cond.value_or(PresenceCondition{});
  r.parent = g.parent;
  r.begin = directive_line + 1;
  r.end = lines_.size();
  r.discarded = discarded;
  const auto& parent_pc = tree_.regions[static_cast<std::size_t>(g.parent)].effective_pc;
  if (discarded) {
    r.branch_pc = PresenceCondition::constant(false);
    r.effective_pc = r.branch_pc;
  } else {
    g.conds.push_back(std::move(cond));
    r.branch_pc = derive_branch_condition(g.conds, g.conds.size() - 1);
    r.effective_pc = make_and({parent_pc, r.branch_pc});
  }
  tree_.regions[static_cast<std::size_t>(g.parent)].children.push_back(r.id);
  g.region = r.id;
  tree_.regions.push_back(std::move(r));
  return g.region;
}

void RegionBuilder::close_branch(std::size_t directive_line) {
  tree_.regions[static_cast<std::size_t>(stack_.back().region)].end = directive_line;
}

void RegionBuilder::open(std::size_t line, std::string text, PresenceCondition cond) {
  directive(line);
  Open g;
  g.parent = current();
  g.group_id = next_group_++;
  g.open_line = line;
  stack_.push_back(std::move(g));
  add_branch(stack_.back(), line, std::move(text), std::move(cond), false);
}

void RegionBuilder::elif(std::size_t line, std::string text, PresenceCondition cond) {
  if (!in_group()) {
    directive(line);
    diags_.warn("UnbalancedElif", {file_, physical(line)}, "#elif without a matching #if; ignored");
    return;
  }
  auto& g = stack_.back();
  tree_.line_region[line] = g.parent;
  close_branch(line);
  if (g.seen_else) {
    diags_.warn("ElifAfterElse", {file_, physical(line)}, "#elif after #else; branch discarded");
    add_branch(g, line, std::move(text), std::move(cond), true);
    return;
  }
  add_branch(g, line, std::move(text), std::move(cond), false);
}

void RegionBuilder::else_branch(std::size_t line) {
  if (!in_group()) {
    directive(line);
    diags_.warn("UnbalancedElse", {file_, physical(line)}, "#else without a matching #if; ignored");
    return;
  }
  auto& g = stack_.back();
  tree_.line_region[line] = g.parent;
  close_branch(line);
  if (g.seen_else) {
    diags_.warn("ElseAfterElse", {file_, physical(line)}, "second #else in one group; branch discarded");
    add_branch(g, line, std::nullopt, std::nullopt, true);
    return;
  }
  g.seen_else = true;
  add_branch(g, line, std::nullopt, std::nullopt, false);
}

void RegionBuilder::endif(std::size_t line) {
  if (!in_group()) {
    directive(line);
    diags_.warn("UnbalancedEndif", {file_, physical(line)}, "#endif without a matching #if; ignored");
    return;
  }
  tree_.line_region[line] = stack_.back().parent;
  close_branch(line);
  stack_.pop_back();
}

void RegionBuilder::text(std::size_t line) {
  tree_.line_region[line] = current();
  tree_.regions[static_cast<std::size_t>(current())].text_lines.push_back(line);
}

void RegionBuilder::directive(std::size_t line) { tree_.line_region[line] = current(); }

RegionTree RegionBuilder::finish() {
  while (in_group()) {
    diags_.warn("MissingEndif", {file_, physical(stack_.back().open_line)},
                "conditional group opened here is not closed; closed at end of file");
    close_branch(lines_.size());
    stack_.pop_back();
  }
  return std::move(tree_);
}

std::string condition_text(const Directive& directive) {
  if (directive.kind != DirectiveKind::Ifdef && directive.kind != DirectiveKind::Ifndef) return directive.argument;
  const auto toks = tokenize(directive.argument);
  if (toks.empty() || !toks[0].is_identifier()) return directive.argument;
  const auto d = "defined(" + toks[0].text + ")";
  return directive.kind == DirectiveKind::Ifdef ? d : "!" + d;
}

RegionTree build_region_tree(const std::vector<LogicalLine>& lines, const std::vector<ScanItem>& items,
                             Diagnostics& diags, const std::string& file, const ConditionCallback& parse_condition,
                             const PresenceCondition& root_pc) {
  MacroTable empty;
  ConditionParser parser(empty, diags);
  auto parse = [&](const Directive& d, const PresenceCondition& context) {
    const auto text = condition_text(d);
    if (parse_condition) return parse_condition(text, context);
    return parser.parse(text, context, {file, lines[d.line].physical_span.start});
  };

  RegionBuilder builder(root_pc, lines, file, diags);
  for (const auto& item : items) {
    if (!item.directive) {
      builder.text(item.line);
      continue;
    }
    const auto& d = *item.directive;
    switch (d.kind) {
      case DirectiveKind::If:
      case DirectiveKind::Ifdef:
      case DirectiveKind::Ifndef:
        builder.open(d.line, condition_text(d), parse(d, builder.current_pc()));
        break;
      case DirectiveKind::Elif:
        builder.elif(d.line, d.argument, builder.in_group() ? parse(d, builder.elif_context()) : PresenceCondition{});
        break;
      case DirectiveKind::Else:
        builder.else_branch(d.line);
        break;
      case DirectiveKind::Endif:
        builder.endif(d.line);
        break;
      default:
        builder.directive(d.line);
        break;
    }
  }
  return builder.finish();
}

}  // namespace varscope
