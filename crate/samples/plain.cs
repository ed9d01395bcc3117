x:=0; s:='';
while x<4 {
  x:=x+1;
  s:=s.'a';
};
if len(s)>2 {y:=ss(s,1,2);};
$
