// DOM rendering: one screen per controller phase, nothing clever.

import type { ControllerState } from "./controller.js";
import type { SurveyController } from "./controller.js";

function el(tag: string, className: string, text?: string): HTMLElement {
  const node = document.createElement(tag);
  node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function renderInstructions(state: ControllerState, controller: SurveyController): HTMLElement {
  const box = el("div", "panel instructions");
  const pre = el("pre", "instructions-text", state.instructions);
  box.appendChild(pre);
  const button = el("button", "primary", state.phase === "instructions"
    ? "I have read the instructions — start"
    : "Back to the survey") as HTMLButtonElement;
  button.addEventListener("click", () => {
    if (state.phase === "instructions") void controller.acknowledgeInstructions();
    else controller.toggleInstructions(false);
  });
  box.appendChild(button);
  return box;
}

function renderItem(state: ControllerState, controller: SurveyController): HTMLElement {
  const item = state.item;
  const box = el("div", "panel item");
  if (item === null) return box;
  if (state.progress) {
    box.appendChild(
      el("div", "progress", `Item ${state.progress.current} of ${state.progress.total}`),
    );
  }
  const passage = el("div", "passage");
  item.sentences.forEach((sentence, i) => {
    passage.appendChild(el("p", i === 1 ? "sentence target" : "sentence", sentence));
  });
  box.appendChild(passage);

  const list = el("div", "choices");
  item.choices.forEach((label, index) => {
    const button = el(
      "button",
      "choice" + (state.selected === index ? " selected" : ""),
      `${index + 1}. ${label}`,
    ) as HTMLButtonElement;
    button.disabled = state.busy;
    button.addEventListener("click", () => controller.selectChoice(index));
    list.appendChild(button);
  });
  box.appendChild(list);

  if (state.validationMessage) box.appendChild(el("div", "warn", state.validationMessage));
  if (state.networkMessage) box.appendChild(el("div", "warn", state.networkMessage));

  const row = el("div", "actions");
  const submit = el("button", "primary", state.busy ? "…" : "Submit") as HTMLButtonElement;
  submit.disabled = state.busy;
  submit.addEventListener("click", () => void controller.submit());
  row.appendChild(submit);
  const help = el("button", "linkish", "Instructions") as HTMLButtonElement;
  help.addEventListener("click", () => controller.toggleInstructions(true));
  row.appendChild(help);
  box.appendChild(row);
  box.appendChild(el("div", "hint", "Keyboard: 1 / 2 / 3 to choose, Enter to submit"));
  return box;
}

function renderFinal(kind: "completed" | "terminated_qc" | "fatal", message: string): HTMLElement {
  const box = el("div", `panel final ${kind}`);
  box.appendChild(el("p", "final-text", message));
  return box;
}

export function render(root: HTMLElement, state: ControllerState, controller: SurveyController): void {
  root.replaceChildren();
  if (state.phase === "boot") {
    root.appendChild(el("div", "panel", "Loading…"));
    return;
  }
  if (state.phase === "instructions" || state.showingInstructions) {
    root.appendChild(renderInstructions(state, controller));
    return;
  }
  switch (state.phase) {
    case "item":
      root.appendChild(renderItem(state, controller));
      break;
    case "completed":
      root.appendChild(
        renderFinal("completed", "All done — thank you for taking part in the study."),
      );
      break;
    case "terminated_qc":
      root.appendChild(
        renderFinal(
          "terminated_qc",
          "The session has ended because a quality-control question was answered "
            + "incorrectly. No further items can be submitted.",
        ),
      );
      break;
    case "fatal":
      root.appendChild(renderFinal("fatal", state.fatalMessage ?? "Something went wrong."));
      break;
  }
}
