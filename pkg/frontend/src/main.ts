import { ApiClient } from "./api.js";
import { SurveyController } from "./controller.js";
import { render } from "./view.js";

function participantId(): string {
  const fromUrl = new URLSearchParams(window.location.search).get("participant");
  if (fromUrl) return fromUrl;
  const key = "articlecloze-participant";
  let stored = window.localStorage.getItem(key);
  if (!stored) {
    stored = `web-${Math.random().toString(36).slice(2, 10)}`;
    window.localStorage.setItem(key, stored);
  }
  return stored;
}

const root = document.getElementById("app");
if (root === null) throw new Error("missing #app container");

const controller = new SurveyController(new ApiClient(""));
controller.subscribe((state) => render(root, state, controller));
window.addEventListener("keydown", (event) => {
  if (event.target instanceof HTMLInputElement) return;
  controller.handleKey(event.key);
});
void controller.start(participantId());
